#include "cli_app.hpp"

int main(int argc, char** argv) { return dfrsim::cli_main(argc, argv); }
