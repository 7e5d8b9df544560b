#include "lapdsm_cli/commands.hpp"

int main(int argc, char** argv) { return lapdsm::cli::run(argc, argv); }
