#pragma once

// Command-line front end: describe | hindcast | validate | forecast | compare | trend.
// Exit codes: 0 success, 2 usage or data error, 3 numerical failure.

namespace techfc {

int run_cli(int argc, char** argv);

}  // namespace techfc
