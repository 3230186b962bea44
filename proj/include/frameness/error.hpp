// Copyright 2026 The frameness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace frameness {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ErrorKind {
    EmptyState,
    NegativeWeight,
    SsrMismatch,
    CompletenessViolated,
    IllegalShift,
    TriangleViolation,
    NotDensityMatrix,
    NotAResource,
    MonotoneViolated,
    MixedOutput,
    WindowExceeded,
    ShiftDirectionUnavailable,
    TargetOutOfRange,
    AuditFailed,
    ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyState: return "EmptyState";
        case ErrorKind::NegativeWeight: return "NegativeWeight";
        case ErrorKind::SsrMismatch: return "SsrMismatch";
        case ErrorKind::CompletenessViolated: return "CompletenessViolated";
        case ErrorKind::IllegalShift: return "IllegalShift";
        case ErrorKind::TriangleViolation: return "TriangleViolation";
        case ErrorKind::NotDensityMatrix: return "NotDensityMatrix";
        case ErrorKind::NotAResource: return "NotAResource";
        case ErrorKind::MonotoneViolated: return "MonotoneViolated";
        case ErrorKind::MixedOutput: return "MixedOutput";
        case ErrorKind::WindowExceeded: return "WindowExceeded";
        case ErrorKind::ShiftDirectionUnavailable: return "ShiftDirectionUnavailable";
        case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
        case ErrorKind::AuditFailed: return "AuditFailed";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Domain error raised by every module. The kind is stable and machine-readable;
/// the message is for humans.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

namespace detail {

inline double tolerance_from_env() {
    if (const char *env = std::getenv("FRAMENESS_TOL")) {
        char *end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0 && v < 1e-2) {
            return v;
        }
    }
    return 1e-9;
}

inline std::atomic<double> &tolerance_slot() {
    static std::atomic<double> slot{tolerance_from_env()};
    return slot;
}

}  // namespace detail

/// Global zero-weight threshold and feasibility tolerance (default 1e-9,
/// FRAMENESS_TOL overrides it at first use).
inline double tolerance() { return detail::tolerance_slot().load(std::memory_order_relaxed); }

inline void set_tolerance(double tol) {
    if (!(tol > 0 && tol < 1e-2)) {
        throw std::invalid_argument("tolerance must lie in (0, 1e-2)");
    }
    detail::tolerance_slot().store(tol, std::memory_order_relaxed);
}

}  // namespace frameness
