#include "recset/cli.hpp"

int main(int argc, char** argv) { return recset::run_command(argc, argv); }
