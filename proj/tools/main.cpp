#include "commands.hpp"

int main(int argc, char** argv) { return wordclust::cli::run(argc, argv); }
