#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "arith_mm/errors.hpp"

namespace arith_mm {

/// Enumeration budgets shared by the exhaustive searches.
struct Caps {
    std::uint64_t ambient_order = 20736;   // 12^4
    std::uint64_t group_size = 20000;
    std::uint64_t lattice_points = 3125;   // ell^dim
    std::uint64_t sigma_elements = 1000000;
    std::uint64_t prime_index = 1000000;   // largest x with p(x) computed exactly
    std::uint64_t exhaustive_threshold_scan = 1000000;
    std::uint64_t bigint_bits = std::uint64_t{1} << 26;

    void validate() const
    {
        detail::require(ambient_order > 0 && group_size > 0 && lattice_points > 0 &&
                            sigma_elements > 0 && prime_index > 0 && bigint_bits > 0,
                        "caps must be positive");
    }

    /// Parses "ambient,group,lattice" (any prefix may be given; empty fields keep defaults).
    static Caps from_list(const std::string& list) { return from_list(list, Caps{}); }

    static Caps from_list(const std::string& list, Caps base)
    {
        std::vector<std::uint64_t*> slots{&base.ambient_order, &base.group_size,
                                          &base.lattice_points};
        std::stringstream ss(list);
        std::string item;
        std::size_t i = 0;
        while (std::getline(ss, item, ',')) {
            detail::require(i < slots.size(), "too many entries in caps list: " + list);
            if (!item.empty()) {
                std::size_t used = 0;
                unsigned long long v = 0;
                try {
                    v = std::stoull(item, &used);
                } catch (const std::exception&) {
                    throw validation_error("caps entry is not an integer: " + item);
                }
                detail::require(used == item.size(), "caps entry is not an integer: " + item);
                *slots[i] = v;
            }
            ++i;
        }
        base.validate();
        return base;
    }
};

} // namespace arith_mm
