#pragma once

namespace mopp {

/// Full command-line surface: generate | plan | bench | render.
/// Exit codes: 0 ok, 2 usage, 3 I/O or generation failure, 4 no path.
int cli_main(int argc, const char* const* argv);

}  // namespace mopp
