#include "oaekit/cli/commands.hpp"

int main(int argc, char** argv) { return oaekit::cli::main_entry(argc, argv); }
