#include "alec/cli.hpp"

int main(int argc, char** argv) { return alec::run_cli(argc, argv); }
