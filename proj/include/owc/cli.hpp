#pragma once

#include <string>
#include <vector>

namespace owc {

// Exit codes: 0 success, 2 validation/parse error, 3 enumeration budget refusal.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace owc
