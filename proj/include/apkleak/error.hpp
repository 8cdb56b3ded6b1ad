/*
Copyright 2026 The apkleak Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace apkleak {

enum class ErrorCode {
    InvalidArgument,
    Io,
    NotAnApp,
    CorruptArchive,
    BadMagic,
    TruncatedPool,
    EmptyString,
    BadConfidence,
    SampleTooLarge,
    RedactionTooWide,
    NoEndpointTemplate,
    MissingTagOrder,
    Config,
    Network,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Receives non-fatal diagnostics (skipped entries, unknown escapes, ...).
using WarningSink = std::function<void(std::string_view)>;

inline void warn(const WarningSink& sink, std::string_view message) {
    if (sink) sink(message);
}

} // namespace apkleak
