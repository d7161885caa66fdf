#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcm::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kFileError = 2,
    kParseError = 3,
    kValidationError = 4,
    kRunError = 5,
};

/// Environment variable naming a JSON inference config used as the flag defaults.
inline constexpr const char* kConfigEnvVar = "FCM_CONFIG";

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fcm::cli
