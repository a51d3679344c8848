#pragma once

namespace odeident {

// Exit codes: 0 success, 1 usage error (message on stderr), 2 numerical or
// I/O failure (JSON error object on stdout).
int parse_and_dispatch(int argc, const char* const* argv);

}  // namespace odeident
