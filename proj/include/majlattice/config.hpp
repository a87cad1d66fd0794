// Copyright 2026 The majlattice Authors
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
#include <stdexcept>
#include <string>
#include <string_view>

namespace majlattice {

enum class ErrorKind {
    NotNormalized,
    NegativeEntry,
    EmptyInput,
    EmptyCollection,
    RankDeficit,
    DegenerateBranch,
    InvalidPlan,
};

inline std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotNormalized:
            return "NotNormalized";
        case ErrorKind::NegativeEntry:
            return "NegativeEntry";
        case ErrorKind::EmptyInput:
            return "EmptyInput";
        case ErrorKind::EmptyCollection:
            return "EmptyCollection";
        case ErrorKind::RankDeficit:
            return "RankDeficit";
        case ErrorKind::DegenerateBranch:
            return "DegenerateBranch";
        case ErrorKind::InvalidPlan:
            return "InvalidPlan";
    }
    return "Unknown";
}

/// Domain error raised by every library operation. The kind is stable and
/// is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind), message_(message) {
    }

    ErrorKind kind() const noexcept {
        return kind_;
    }
    /// what() without the kind prefix.
    const std::string &message() const noexcept {
        return message_;
    }

   private:
    ErrorKind kind_;
    std::string message_;
};

namespace detail {
inline std::atomic<double> &epsilon_storage() {
    static std::atomic<double> value{1e-9};
    return value;
}
}  // namespace detail

/// Global tolerance used for normalization checks, partial-sum comparisons
/// and effective rank. Defaults to 1e-9.
inline double epsilon() {
    return detail::epsilon_storage().load(std::memory_order_relaxed);
}

inline void set_epsilon(double eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    detail::epsilon_storage().store(eps, std::memory_order_relaxed);
}

/// Restores the previous tolerance on scope exit.
class ScopedEpsilon {
   public:
    explicit ScopedEpsilon(double eps) : previous_(epsilon()) {
        set_epsilon(eps);
    }
    ~ScopedEpsilon() {
        detail::epsilon_storage().store(previous_, std::memory_order_relaxed);
    }
    ScopedEpsilon(const ScopedEpsilon &) = delete;
    ScopedEpsilon &operator=(const ScopedEpsilon &) = delete;

   private:
    double previous_;
};

}  // namespace majlattice
