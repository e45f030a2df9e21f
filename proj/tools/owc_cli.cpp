#include "owc/cli.hpp"

int main(int argc, char** argv) { return owc::run_cli(argc, argv); }
