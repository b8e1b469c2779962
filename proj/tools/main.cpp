#include "echowall/cli.hpp"

int main(int argc, char** argv) { return echowall::run_cli(argc, argv); }
