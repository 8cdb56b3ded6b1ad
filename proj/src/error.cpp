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

#include "apkleak/error.hpp"

namespace apkleak {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::NotAnApp: return "NotAnApp";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedPool: return "TruncatedPool";
    case ErrorCode::EmptyString: return "EmptyString";
    case ErrorCode::BadConfidence: return "BadConfidence";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::RedactionTooWide: return "RedactionTooWide";
    case ErrorCode::NoEndpointTemplate: return "NoEndpointTemplate";
    case ErrorCode::MissingTagOrder: return "MissingTagOrder";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Network: return "Network";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

} // namespace apkleak
