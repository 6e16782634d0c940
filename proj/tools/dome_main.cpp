#include "dome/cli/commands.hpp"

int main(int argc, char** argv) { return dome::cli::run(argc, argv); }
