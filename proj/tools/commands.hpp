#pragma once

namespace wordclust::cli {

// Exit status: 0 success, 1 usage/config/input format, 2 runtime failure.
int run(int argc, char** argv);

}  // namespace wordclust::cli
