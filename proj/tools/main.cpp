#include "stacklaw/cli.hpp"

int main(int argc, char** argv) { return stacklaw::run_cli(argc, argv); }
