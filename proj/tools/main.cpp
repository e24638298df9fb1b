#include "hyperpaths/cli.hpp"

int main(int argc, char** argv) { return hyperpaths::run_cli(argc, argv); }
