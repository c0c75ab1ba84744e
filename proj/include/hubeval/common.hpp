#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hubeval {

/// Base error for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Hub { TorchHub, TensorHub, HuggingFace };

std::string_view to_string(Hub hub);

/// Accepts "torchhub", "tensorhub", "huggingface" (case-insensitive; '_' and '-' ignored).
Hub parse_hub(std::string_view text);

/// Domain labels each hub publishes for its model cards.
std::span<const std::string_view> hub_domains(Hub hub);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);
bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Seeded randomness. std::mt19937_64 has a standard-mandated output sequence; the
// bounded draw below (rejection sampling on the raw 64-bit output) is ours, so the
// resulting shuffles are identical on every conforming implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Fisher-Yates from the back: for i = n-1 .. 1, swap(i, uniform_below(i + 1)).
template <class T>
void seeded_shuffle(std::span<T> items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace hubeval
