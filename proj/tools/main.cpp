#include "qclose/cli.hpp"

int main(int argc, char** argv) { return qclose::cli_main(argc, argv); }
