#pragma once

// Freely reduced words over a finitely generated free group.
//
// A word is a vector of nonzero ints: +k is the k-th generator (1-based),
// -k its inverse.  All operations keep words freely reduced.

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace catsurf {

using Word = std::vector<int>;

inline void push_reduced(Word& w, int letter) {
    if (letter == 0) throw std::invalid_argument("word letter must be nonzero");
    if (!w.empty() && w.back() == -letter) {
        w.pop_back();
    } else {
        w.push_back(letter);
    }
}

inline Word reduce_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (int x : w) push_reduced(out, x);
    return out;
}

inline Word concat_words(const Word& u, const Word& v) {
    Word out = u;
    for (int x : v) push_reduced(out, x);
    return out;
}

inline Word inverse_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
}

inline bool is_reduced(const Word& w) {
    for (size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] == -w[i + 1]) return false;
    }
    return !std::count(w.begin(), w.end(), 0);
}

// Text form: generator k is the k-th lowercase letter, uppercase for the
// inverse.  The empty word is "".
inline std::string format_word(const Word& w) {
    std::string s;
    for (int x : w) {
        int k = std::abs(x);
        if (k < 1 || k > 26) throw std::invalid_argument("word letter out of a-z range");
        char c = static_cast<char>('a' + k - 1);
        s += (x > 0) ? c : static_cast<char>(c - 'a' + 'A');
    }
    return s;
}

inline Word parse_word(const std::string& s) {
    Word w;
    for (char c : s) {
        if (c >= 'a' && c <= 'z') {
            push_reduced(w, c - 'a' + 1);
        } else if (c >= 'A' && c <= 'Z') {
            push_reduced(w, -(c - 'A' + 1));
        } else if (c == ' ') {
            continue;
        } else {
            throw std::invalid_argument(std::string("bad word character: ") + c);
        }
    }
    return w;
}

}  // namespace catsurf
