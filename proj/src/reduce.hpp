#pragma once

#include <cstddef>

namespace ncvortex::detail {

template <class T, class Get>
T pairwise(std::size_t lo, std::size_t hi, const Get& get)
{
    if (hi - lo <= 8) {
        T s = get(lo);
        for (std::size_t k = lo + 1; k < hi; ++k)
            s += get(k);
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise<T>(lo, mid, get) + pairwise<T>(mid, hi, get);
}

} // namespace ncvortex::detail
