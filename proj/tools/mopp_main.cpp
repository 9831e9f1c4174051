#include "mopp/cli.hpp"

int main(int argc, char** argv) { return mopp::cli_main(argc, argv); }
