#pragma once

#include <string>
#include <vector>

#include "parampoly.hpp"

namespace mominv {

struct CorpusEntry {
    std::string name;
    std::string source;
    Bindings default_bindings; // used when a check needs concrete parameters
};

// Built-in benchmark programs. corpus/<name>.psl mirrors each source verbatim.
inline const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> v;
        auto add = [&](std::string name, std::string src, Bindings b = {}) {
            v.push_back({std::move(name), std::move(src), std::move(b)});
        };

        add("binomial",
            "x := 0\n"
            "while true:\n"
            "    x := x + 1 [p] x\n",
            {{"p", Rational(1, 2)}});

        add("coupon",
            "f := 0\n"
            "c := 0\n"
            "d := 0\n"
            "while true:\n"
            "    f := 1 [1/2] 0\n"
            "    c := 1 - f + c*f\n"
            "    d := d + f - d*f\n");

        add("coupon4",
            "f := 0\n"
            "g := 0\n"
            "a := 0\n"
            "b := 0\n"
            "c := 0\n"
            "d := 0\n"
            "while true:\n"
            "    f := 1 [1/2] 0\n"
            "    g := 1 [1/2] 0\n"
            "    a := a + (1 - a)*f*g\n"
            "    b := b + (1 - b)*f*(1 - g)\n"
            "    c := c + (1 - c)*(1 - f)*g\n"
            "    d := d + (1 - d)*(1 - f)*(1 - g)\n");

        add("multipath_demo",
            "x := 0\n"
            "while true:\n"
            "    if flip(1/3):\n"
            "        x := x + 2 [1/2] x\n"
            "    else:\n"
            "        x := x - 1 [1/4] x + 1\n");

        add("product_dep_var",
            "f := 0\n"
            "x := 0\n"
            "y := 0\n"
            "p := 0\n"
            "while true:\n"
            "    f := 0 [1/2] 1\n"
            "    x := x + f\n"
            "    y := y + 1 - f\n"
            "    p := x*y\n");

        add("random_walk_1d_cts",
            "x := 0\n"
            "v := 0\n"
            "while true:\n"
            "    v := u(0, 1)\n"
            "    x := x + v [7/10] x - v\n");

        add("random_walk_2d",
            "h := 0\n"
            "x := 0\n"
            "y := 0\n"
            "while true:\n"
            "    h := 1 [1/2] 0\n"
            "    x := x - h [1/2] x + h\n"
            "    y := y + (1 - h) [1/2] y - (1 - h)\n");

        add("square",
            "x := 0\n"
            "y := 1\n"
            "while true:\n"
            "    x := x + 2 [1/2] x\n"
            "    y := x^2\n");

        add("stuttering_a",
            "f := 0\n"
            "x := -1\n"
            "y := 1\n"
            "s := 0\n"
            "while true:\n"
            "    f := 1 [3/4] 0\n"
            "    x := x + f*u(1 - d, 1 + d)\n"
            "    y := y + f*u(2 - 2*d, 2 + 2*d)\n"
            "    s := x + y\n",
            {{"d", Rational(1)}});

        add("stuttering_p",
            "f := 0\n"
            "x := -1\n"
            "y := 1\n"
            "s := 0\n"
            "while true:\n"
            "    f := 1 [p] 0\n"
            "    x := x + f*u(0, 2)\n"
            "    y := y + f*u(0, 4)\n"
            "    s := x + y\n",
            {{"p", Rational(1, 2)}});

        add("sum_rnd_series",
            "m := 0\n"
            "x := 0\n"
            "while true:\n"
            "    m := m + 1\n"
            "    x := x + m [1/2] x\n");

        return v;
    }();
    return entries;
}

inline const CorpusEntry& corpus_entry(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return e;
    throw Error("no built-in program named '" + name + "'");
}

} // namespace mominv
