// SPDX-License-Identifier: Apache-2.0
#include "wishtrack/harness/cli.hpp"

int main(int argc, char** argv) { return wishtrack::cli_dispatch(argc, argv); }
