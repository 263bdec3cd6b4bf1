#include "hetnet/word.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace hetnet {

void check_word(std::string_view w) {
    if (w.empty()) throw std::invalid_argument("empty word");
    for (char c : w)
        if (c != 'A' && c != 'B') throw std::invalid_argument("word letters must be A or B");
}

std::size_t least_rotation(std::string_view w) {
    const std::size_t n = w.size();
    if (n == 0) return 0;
    const std::string s = std::string(w) + std::string(w);
    std::vector<long> f(2 * n, -1);
    std::size_t k = 0;
    for (std::size_t j = 1; j < 2 * n; ++j) {
        const char sj = s[j];
        long i = f[j - k - 1];
        while (i != -1 && sj != s[k + static_cast<std::size_t>(i) + 1]) {
            if (sj < s[k + static_cast<std::size_t>(i) + 1]) k = j - static_cast<std::size_t>(i) - 1;
            i = f[static_cast<std::size_t>(i)];
        }
        if (sj != s[k + static_cast<std::size_t>(i) + 1]) {
            // i == -1 here
            if (sj < s[k]) k = j;
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    return k % n;
}

std::string primitive_root(std::string_view w) {
    const std::size_t n = w.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
        if (ok) return std::string(w.substr(0, p));
    }
    return std::string(w);
}

RootSequence::RootSequence(std::string_view w) {
    check_word(w);
    const std::string root = primitive_root(w);
    const std::size_t k = least_rotation(root);
    letters_ = root.substr(k) + root.substr(0, k);
}

namespace {

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    bool done() const { return pos >= s.size(); }

    std::size_t exponent() {
        if (!done() && s[pos] == '^') ++pos;
        std::size_t start = pos;
        std::size_t value = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            value = value * 10 + static_cast<std::size_t>(s[pos] - '0');
            if (value > 10000) throw std::invalid_argument("exponent too large");
            ++pos;
        }
        if (start == pos) {
            if (start > 0 && s[start - 1] == '^') throw std::invalid_argument("missing exponent after '^'");
            return 1;
        }
        if (value == 0) throw std::invalid_argument("zero exponent");
        return value;
    }

    std::string sequence(bool nested) {
        std::string out;
        while (!done()) {
            const char c = s[pos];
            std::string item;
            if (c == ')') {
                if (!nested) throw std::invalid_argument("unbalanced ')'");
                return out;
            }
            ++pos;
            switch (c) {
                case 'A': item = "A"; break;
                case 'B': item = "B"; break;
                case 'T': item = "AAB"; break;
                case 'D': item = "BB"; break;
                case 'Q': item = "ABBB"; break;
                case '(':
                    item = sequence(true);
                    if (done() || s[pos] != ')') throw std::invalid_argument("unbalanced '('");
                    ++pos;
                    break;
                default:
                    throw std::invalid_argument(std::string("unexpected character '") + c + "' in sequence");
            }
            const std::size_t e = exponent();
            for (std::size_t i = 0; i < e; ++i) out += item;
            if (out.size() > 100000) throw std::invalid_argument("sequence too long");
        }
        if (nested) throw std::invalid_argument("unbalanced '('");
        return out;
    }
};

}  // namespace

Word RootSequence::expand(std::string_view text) {
    Parser p{text};
    Word w = p.sequence(false);
    check_word(w);
    return w;
}

RootSequence RootSequence::parse(std::string_view text) { return RootSequence(expand(text)); }

}  // namespace hetnet
