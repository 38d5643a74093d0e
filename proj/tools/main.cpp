#include "cli.hpp"

int main(int argc, char** argv) { return lexent::cli::run(argc, argv); }
