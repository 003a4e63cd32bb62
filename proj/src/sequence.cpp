#include "dnasim/sequence.hpp"

#include "dnasim/errors.hpp"

namespace dnasim {

BitStream::BitStream(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] > 1) {
            throw Error("bit stream value " + std::to_string(bits_[i]) + " at position " +
                        std::to_string(i) + " is not 0 or 1");
        }
    }
}

BitStream::BitStream(std::size_t n, std::uint8_t value) : bits_(n, value ? 1 : 0) {}

BitStream BitStream::from_string(std::string_view s) {
    std::vector<std::uint8_t> v;
    v.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') {
            throw Error("invalid bit character at position " + std::to_string(i));
        }
        v.push_back(s[i] == '1' ? 1 : 0);
    }
    BitStream out;
    out.bits_ = std::move(v);
    return out;
}

std::string BitStream::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

DnaSequence::DnaSequence(std::string bases) : bases_(std::move(bases)) {
    for (std::size_t i = 0; i < bases_.size(); ++i) {
        if (base_index(bases_[i]) < 0) {
            throw IngestError(std::string("invalid nucleotide '") + bases_[i] + "' at position " +
                              std::to_string(i));
        }
    }
}

void DnaSequence::push_back(char base) {
    if (base_index(base) < 0) {
        throw IngestError(std::string("invalid nucleotide '") + base + "'");
    }
    bases_.push_back(base);
}

}  // namespace dnasim
