#include <catch2/catch_amalgamated.hpp>

#include "catsurf/target_space.hpp"
#include "catsurf/words.hpp"

using namespace catsurf;

TEST_CASE("free reduction cancels adjacent inverse pairs") {
    CHECK(reduce_word({1, -1}) == Word{});
    CHECK(reduce_word({1, 2, -2, -1}) == Word{});
    CHECK(reduce_word({1, 2, -2, 3}) == Word({1, 3}));
    CHECK(reduce_word({1, 1, -1, -1, 2}) == Word({2}));
}

TEST_CASE("concat_words reduces across the seam") {
    CHECK(concat_words({1, 2}, {-2, -1}) == Word{});
    CHECK(concat_words({1, 2}, {-2, 3}) == Word({1, 3}));
    CHECK(concat_words({}, {5}) == Word({5}));
}

TEST_CASE("inverse_word reverses and negates") {
    Word w{1, 2, -3};
    CHECK(inverse_word(w) == Word({3, -2, -1}));
    CHECK(concat_words(w, inverse_word(w)).empty());
    CHECK(concat_words(inverse_word(w), w).empty());
}

TEST_CASE("is_reduced detects cancellable pairs") {
    CHECK(is_reduced({1, 2, -1}));
    CHECK_FALSE(is_reduced({1, -1}));
    CHECK_FALSE(is_reduced({2, 1, -1, 2}));
    CHECK(is_reduced({}));
}

TEST_CASE("push_reduced rejects the zero letter") {
    Word w;
    CHECK_THROWS_AS(push_reduced(w, 0), std::invalid_argument);
}

TEST_CASE("format / parse round trip") {
    Word w{1, -2, 3, -26};
    CHECK(format_word(w) == "aBcZ");
    CHECK(parse_word(format_word(w)) == w);
    CHECK(parse_word("") == Word{});
    CHECK(parse_word("a B") == Word({1, -2}));
    CHECK_THROWS_AS(parse_word("a1"), std::invalid_argument);
    CHECK_THROWS_AS(format_word(Word{27}), std::invalid_argument);
}

TEST_CASE("parse_word reduces its input") {
    CHECK(parse_word("aA").empty());
    CHECK(parse_word("abBA").empty());
}

TEST_CASE("surface group relator has reduced length 4g") {
    for (int g = 2; g <= 4; ++g) {
        Word r = surface_group_relator(g);
        CHECK(static_cast<int>(r.size()) == 4 * g);
        CHECK(is_reduced(r));
    }
    CHECK(surface_group_relator(2) == Word({1, 2, -1, -2, 3, 4, -3, -4}));
}
