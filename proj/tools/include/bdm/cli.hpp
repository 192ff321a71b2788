#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bdm::cli {

// Exit codes shared by every subcommand.
enum Exit : int { kAffirmative = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bdm::cli
