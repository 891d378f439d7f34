#include "cdde/runner.hpp"

int main(int argc, char** argv) { return cdde::run_command(argc, argv); }
