#include "commands.hpp"

int main(int argc, char** argv) { return heunpulse::cli::run(argc, argv); }
