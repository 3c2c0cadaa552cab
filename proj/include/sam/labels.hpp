#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace sam {

enum class AccessLabel { Transitional = 0, Episodic = 1, Chronic = 2 };

inline constexpr std::size_t kLabelCount = 3;
inline constexpr std::array<AccessLabel, kLabelCount> kAllLabels = {
    AccessLabel::Transitional, AccessLabel::Episodic, AccessLabel::Chronic};

constexpr std::size_t index_of(AccessLabel label) { return static_cast<std::size_t>(label); }

constexpr std::string_view to_string(AccessLabel label) {
    switch (label) {
        case AccessLabel::Transitional: return "transitional";
        case AccessLabel::Episodic: return "episodic";
        case AccessLabel::Chronic: return "chronic";
    }
    return "unknown";
}

/// Accepts the lowercase names produced by to_string (case-insensitive).
std::optional<AccessLabel> parse_label(std::string_view text);

/// Per-label storage indexed by AccessLabel.
template <typename T>
using PerLabel = std::array<T, kLabelCount>;

}  // namespace sam
