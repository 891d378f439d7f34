#include "cdde/scenario.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace cdde {

namespace {

struct Reader {
    std::string source;

    [[nodiscard]] int line(const YAML::Node& n) const { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

    [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const {
        const int l = line(n);
        throw ConfigError(l > 0 ? fmt::format("{}:{}: {}", source, l, msg) : fmt::format("{}: {}", source, msg), l);
    }

    void require_map(const YAML::Node& n, const std::string& what) const {
        if (!n.IsMap()) fail(n, what + " must be a mapping");
    }

    void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& what) const {
        require_map(n, what);
        for (const auto& kv : n) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.contains(key)) fail(kv.first, fmt::format("unknown key '{}' in {}", key, what));
        }
    }

    template <typename T>
    T get(const YAML::Node& n, const std::string& what) const {
        if (!n.IsScalar()) fail(n, what + " must be a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::BadConversion&) {
            fail(n, fmt::format("{} has invalid value '{}'", what, n.Scalar()));
        }
    }

    std::vector<double> get_list(const YAML::Node& n, const std::string& what) const {
        if (!n.IsSequence()) fail(n, what + " must be a list");
        std::vector<double> out;
        for (const auto& v : n) out.push_back(get<double>(v, what + " entry"));
        return out;
    }
};

NonlinearitySpec read_nonlinearity(const Reader& r, const YAML::Node& n) {
    r.check_keys(n, {"kind", "slope", "scale", "exponent", "lower", "upper", "bound"}, "nonlinearity");
    if (!n["kind"]) r.fail(n, "nonlinearity needs a 'kind'");
    if (!n["slope"]) r.fail(n, "nonlinearity needs a 'slope'");
    NonlinearityKind kind{};
    try {
        kind = parse_nonlinearity_kind(r.get<std::string>(n["kind"], "kind"));
    } catch (const std::exception& e) {
        r.fail(n["kind"], e.what());
    }
    const double slope = r.get<double>(n["slope"], "slope");
    NonlinearitySpec f;
    switch (kind) {
        case NonlinearityKind::linear: f = NonlinearitySpec::linear(slope); break;
        case NonlinearityKind::tanh_saturating:
            f = NonlinearitySpec::tanh(slope, n["scale"] ? r.get<double>(n["scale"], "scale") : 1.0);
            break;
        case NonlinearityKind::hill_odd:
            f = NonlinearitySpec::hill(slope, n["scale"] ? r.get<double>(n["scale"], "scale") : 1.0,
                                       n["exponent"] ? r.get<double>(n["exponent"], "exponent") : 2.0);
            break;
        case NonlinearityKind::piecewise_linear:
            f = NonlinearitySpec::piecewise(slope, n["lower"] ? r.get<double>(n["lower"], "lower") : -1.0,
                                            n["upper"] ? r.get<double>(n["upper"], "upper") : 1.0);
            break;
    }
    if (n["bound"]) f.one_sided_bound = r.get<double>(n["bound"], "bound");
    try {
        f.validate();
    } catch (const std::exception& e) {
        r.fail(n, e.what());
    }
    return f;
}

CyclicSystem read_system(const Reader& r, const YAML::Node& n) {
    r.check_keys(n, {"lambdas", "tau", "delays", "a", "nonlinearities"}, "system");
    if (!n["lambdas"]) r.fail(n, "system needs 'lambdas'");
    const auto l = r.get_list(n["lambdas"], "lambdas");
    if (l.empty()) r.fail(n["lambdas"], "lambdas must not be empty");
    const auto m = l.size();
    CyclicSystem sys;
    sys.lambdas = Eigen::Map<const VectorXd>(l.data(), static_cast<Eigen::Index>(m));

    if (n["tau"] && n["delays"]) r.fail(n["delays"], "give either 'tau' or 'delays', not both");
    if (n["tau"]) {
        sys.delays.assign(m, 0.0);
        sys.delays.back() = r.get<double>(n["tau"], "tau");
    } else if (n["delays"]) {
        sys.delays = r.get_list(n["delays"], "delays");
        if (sys.delays.size() != m) r.fail(n["delays"], fmt::format("expected {} delays", m));
    } else {
        r.fail(n, "system needs 'tau' or 'delays'");
    }

    if (n["a"] && n["nonlinearities"]) r.fail(n["nonlinearities"], "give either 'a' or 'nonlinearities', not both");
    if (n["a"]) {
        const double a = r.get<double>(n["a"], "a");
        sys.nonlinearities.assign(m, NonlinearitySpec::linear(1.0));
        sys.nonlinearities.back() = NonlinearitySpec::linear(-a);
    } else if (n["nonlinearities"]) {
        const auto& list = n["nonlinearities"];
        if (!list.IsSequence() || list.size() != m) r.fail(list, fmt::format("nonlinearities must be a list of {} entries", m));
        for (const auto& f : list) sys.nonlinearities.push_back(read_nonlinearity(r, f));
    } else {
        r.fail(n, "system needs 'a' or 'nonlinearities'");
    }
    try {
        sys.validate();
        linearize(normalize_system(sys).standard);
    } catch (const std::exception& e) {
        r.fail(n, e.what());
    }
    return sys;
}

void read_analysis(const Reader& r, const YAML::Node& n, AnalysisSpec& a) {
    r.check_keys(n,
                 {"region", "kmax", "horizon", "step_div", "window", "transient", "seeds", "ensemble_seed", "certify_tol",
                  "newton_tol", "cluster_radius"},
                 "analysis");
    if (n["region"]) {
        const auto v = r.get_list(n["region"], "region");
        if (v.size() != 4) r.fail(n["region"], "region must be [re_min, re_max, im_min, im_max]");
        Rectangle rect{v[0], v[1], v[2], v[3]};
        if (!rect.valid()) r.fail(n["region"], "region is empty");
        a.region = rect;
    }
    if (n["kmax"]) a.kmax = r.get<int>(n["kmax"], "kmax");
    if (a.kmax < 1) r.fail(n["kmax"], "kmax must be >= 1");
    if (n["horizon"]) a.horizon = r.get<double>(n["horizon"], "horizon");
    if (a.horizon && !(*a.horizon > 0)) r.fail(n["horizon"], "horizon must be positive");
    if (n["step_div"]) a.step_div = r.get<int>(n["step_div"], "step_div");
    if (a.step_div < 64) r.fail(n["step_div"], "step_div must be >= 64");
    if (n["window"]) a.window = r.get<double>(n["window"], "window");
    if (a.window && !(*a.window > 0)) r.fail(n["window"], "window must be positive");
    if (n["transient"]) a.transient = r.get<double>(n["transient"], "transient");
    if (a.transient && *a.transient < 0) r.fail(n["transient"], "transient must be non-negative");
    if (n["seeds"]) a.seeds = r.get<int>(n["seeds"], "seeds");
    if (a.seeds < 1) r.fail(n["seeds"], "seeds must be >= 1");
    if (n["ensemble_seed"]) a.ensemble_seed = r.get<std::uint64_t>(n["ensemble_seed"], "ensemble_seed");
    if (n["certify_tol"]) a.spectrum.certify_tol = r.get<double>(n["certify_tol"], "certify_tol");
    if (n["newton_tol"]) a.spectrum.newton_tol = r.get<double>(n["newton_tol"], "newton_tol");
    if (n["cluster_radius"]) a.spectrum.cluster_radius = r.get<double>(n["cluster_radius"], "cluster_radius");
}

void read_initial(const Reader& r, const YAML::Node& n, InitialSpec& s) {
    r.check_keys(n, {"kind", "value", "amplitude", "eigen_amplitude", "seed"}, "initial");
    if (n["kind"]) {
        const auto k = r.get<std::string>(n["kind"], "kind");
        if (k == "zero") s.kind = InitialKind::zero;
        else if (k == "constant") s.kind = InitialKind::constant;
        else if (k == "random") s.kind = InitialKind::random;
        else if (k == "eigen") s.kind = InitialKind::eigen;
        else r.fail(n["kind"], "initial kind must be zero, constant, random or eigen");
    }
    if (n["value"]) s.value = r.get<double>(n["value"], "value");
    if (n["amplitude"]) s.amplitude = r.get<double>(n["amplitude"], "amplitude");
    if (n["eigen_amplitude"]) s.eigen_amplitude = r.get<double>(n["eigen_amplitude"], "eigen_amplitude");
    if (n["seed"]) s.seed = r.get<std::uint64_t>(n["seed"], "seed");
}

SweepSpec read_sweep(const Reader& r, const YAML::Node& n) {
    r.check_keys(n, {"parameter", "from", "to", "steps", "analyses"}, "sweep");
    SweepSpec s;
    for (const char* key : {"parameter", "from", "to", "steps"})
        if (!n[key]) r.fail(n, fmt::format("sweep needs '{}'", key));
    s.parameter = r.get<std::string>(n["parameter"], "parameter");
    if (s.parameter != "a" && s.parameter != "tau") r.fail(n["parameter"], "sweep parameter must be 'a' or 'tau'");
    s.from = r.get<double>(n["from"], "from");
    s.to = r.get<double>(n["to"], "to");
    s.steps = r.get<int>(n["steps"], "steps");
    if (s.steps < 2) r.fail(n["steps"], "sweep needs at least 2 steps");
    if (!(s.from < s.to) || !(s.from > 0)) r.fail(n, "sweep range must satisfy 0 < from < to");
    if (n["analyses"]) {
        if (!n["analyses"].IsSequence()) r.fail(n["analyses"], "analyses must be a list");
        for (const auto& a : n["analyses"]) {
            const auto name = r.get<std::string>(a, "analysis");
            if (name != "a0" && name != "strip" && name != "stability" && name != "ensemble")
                r.fail(a, "unknown analysis '" + name + "' (a0, strip, stability, ensemble)");
            s.analyses.push_back(name);
        }
    } else {
        s.analyses = {"a0"};
    }
    return s;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
    const Reader r{source};
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(fmt::format("{}:{}: {}", source, e.mark.line + 1, e.msg), e.mark.line + 1);
    }
    if (!root.IsMap()) throw ConfigError(source + ": scenario must be a mapping");
    r.check_keys(root, {"name", "system", "analysis", "initial", "sweep", "output"}, "scenario");
    if (!root["system"]) r.fail(root, "scenario needs a 'system' section");
    ScenarioConfig cfg;
    cfg.text = text;
    cfg.name = root["name"] ? r.get<std::string>(root["name"], "name") : "scenario";
    cfg.system = read_system(r, root["system"]);
    if (root["analysis"]) read_analysis(r, root["analysis"], cfg.analysis);
    if (root["initial"]) read_initial(r, root["initial"], cfg.initial);
    if (root["sweep"]) cfg.sweep = read_sweep(r, root["sweep"]);
    if (root["output"]) cfg.output_dir = r.get<std::string>(root["output"], "output");
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read scenario " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::uint64_t scenario_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Rectangle parse_region(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--region: '" + item + "' is not a number");
        }
    }
    if (v.size() != 4) throw ConfigError("--region expects re_min,re_max,im_min,im_max");
    Rectangle r{v[0], v[1], v[2], v[3]};
    if (!r.valid()) throw ConfigError("--region is empty (need re_min < re_max and im_min < im_max)");
    return r;
}

}  // namespace cdde
