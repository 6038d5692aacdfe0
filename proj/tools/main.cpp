#include "tabletitle/cli/run.hpp"

int main(int argc, char** argv) { return tabletitle::cli::run_main(argc, argv); }
