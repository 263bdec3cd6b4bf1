#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace hetnet {

/// Type A transition xi_j -> xi_{j+1}, type B transition xi_j -> xi_{j+3}.
enum class Letter : char { A = 'A', B = 'B' };

/// A word over {A, B}, stored as its letters.
using Word = std::string;

/// Throws std::invalid_argument unless `w` is nonempty and uses only A and B.
void check_word(std::string_view w);

/// Index of the lexicographically least rotation (Booth's algorithm).
std::size_t least_rotation(std::string_view w);
/// Shortest u with w = u^k.
std::string primitive_root(std::string_view w);

/// A periodic visiting pattern: primitive, and rotated to its least
/// rotation so that cyclic shifts compare equal.
class RootSequence {
public:
    RootSequence() = default;
    /// Reduce `w` to its primitive root and canonical rotation.
    explicit RootSequence(std::string_view w);

    /// Letter strings plus block shorthand T = AAB, D = BB, Q = ABBB,
    /// parenthesised groups, and exponents written as "T2D", "T^2D" or "(TD)^3".
    static RootSequence parse(std::string_view text);
    /// Expand the shorthand of `parse` without canonicalising.
    static Word expand(std::string_view text);

    const Word& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    char operator[](std::size_t i) const { return letters_[i]; }

    friend bool operator==(const RootSequence&, const RootSequence&) = default;
    friend auto operator<=>(const RootSequence& a, const RootSequence& b) {
        if (a.size() != b.size()) return a.size() <=> b.size();
        return a.letters_ <=> b.letters_;
    }

private:
    Word letters_;
};

}  // namespace hetnet
