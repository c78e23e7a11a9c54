#include "conceptmap/commands.hpp"

int main(int argc, char** argv) { return conceptmap::run_cli(argc, argv); }
