#include "odeident/cli.hpp"

int main(int argc, char** argv) { return odeident::parse_and_dispatch(argc, argv); }
