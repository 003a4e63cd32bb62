#pragma once
// Payload value types: bit streams and nucleotide sequences.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dnasim {

// Nucleotide codes in canonical order A < C < G < T.
inline constexpr char kBases[4] = {'A', 'C', 'G', 'T'};

inline constexpr int base_index(char b) noexcept {
    switch (b) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return -1;
    }
}

inline constexpr bool is_gc(char b) noexcept { return b == 'C' || b == 'G'; }

class BitStream {
public:
    BitStream() = default;
    explicit BitStream(std::vector<std::uint8_t> bits);  // throws if any value > 1
    explicit BitStream(std::size_t n, std::uint8_t value = 0);

    // Parses a string of '0'/'1' characters.
    static BitStream from_string(std::string_view s);
    std::string to_string() const;

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
    void set(std::size_t i, bool v) noexcept { bits_[i] = v ? 1 : 0; }
    void push_back(bool v) { bits_.push_back(v ? 1 : 0); }
    void reserve(std::size_t n) { bits_.reserve(n); }
    void resize(std::size_t n) { bits_.resize(n, 0); }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const BitStream&, const BitStream&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

class DnaSequence {
public:
    DnaSequence() = default;
    // Throws IngestError on any character outside {A,C,G,T}.
    explicit DnaSequence(std::string bases);
    // Caller guarantees the alphabet; used on hot paths that only emit kBases.
    static DnaSequence unchecked(std::string bases) {
        DnaSequence s;
        s.bases_ = std::move(bases);
        return s;
    }

    std::size_t size() const noexcept { return bases_.size(); }
    bool empty() const noexcept { return bases_.empty(); }
    char operator[](std::size_t i) const noexcept { return bases_[i]; }
    void push_back(char base);  // validated
    void push_index(int idx) { bases_.push_back(kBases[idx & 3]); }
    void reserve(std::size_t n) { bases_.reserve(n); }

    const std::string& str() const noexcept { return bases_; }
    std::string_view view() const noexcept { return bases_; }

    friend bool operator==(const DnaSequence&, const DnaSequence&) = default;

private:
    std::string bases_;
};

}  // namespace dnasim
