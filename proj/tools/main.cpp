#include "entbroadcast/cli.hpp"

int main(int argc, char** argv) { return entbroadcast::cli::main_entry(argc, argv); }
