#include "techfc/cli.hpp"

int main(int argc, char** argv) { return techfc::run_cli(argc, argv); }
