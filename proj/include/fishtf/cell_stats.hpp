#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "fishtf/error.hpp"

namespace fishtf {

using Count = std::uint64_t;

/// Every statistic needed to weigh term i in document j.
///
/// Integer fields are the ground truth. The proportions are derived from them
/// in exactly one place (`CellStats::make`) so that every weight sees the same
/// rounding.
struct CellStats {
    std::size_t term = 0;
    std::size_t doc = 0;

    Count n_ij = 0; ///< occurrences of the term in the document
    Count n_i = 0;  ///< occurrences of the term in the collection
    Count n_j = 0;  ///< length of the document
    Count n = 0;    ///< length of the collection
    Count b_i = 0;  ///< documents containing the term
    Count d = 0;    ///< documents in the collection

    double p_ij = 0.0;    ///< n_ij / n_j
    double p_i = 0.0;     ///< n_i / n
    double p_tilde = 0.0; ///< (n_i - n_ij) / (n - n_j); 0 when the document is the whole collection
    double p_check = 0.0; ///< p_ij + 1 / n_j

    /// Validates the count relations and fills in the proportions.
    static CellStats make(Count n_ij, Count n_i, Count n_j, Count n, Count b_i, Count d,
                          std::size_t term = 0, std::size_t doc = 0)
    {
        if (n == 0 || n_j == 0)
            throw Error(Errc::invalid_params, "cell statistics need n >= 1 and n_j >= 1");
        if (n_i > n || n_j > n)
            throw Error(Errc::invalid_params, "n_i and n_j must not exceed n");
        if (n_ij > n_i || n_ij > n_j)
            throw Error(Errc::invalid_params, "n_ij must not exceed min(n_i, n_j)");
        if (b_i > d)
            throw Error(Errc::invalid_params, "b_i must not exceed d");
        // The term mass outside document j cannot exceed the room left there.
        if (n_i - n_ij > n - n_j)
            throw Error(Errc::invalid_params, "n_i - n_ij exceeds n - n_j");

        CellStats s;
        s.term = term;
        s.doc = doc;
        s.n_ij = n_ij;
        s.n_i = n_i;
        s.n_j = n_j;
        s.n = n;
        s.b_i = b_i;
        s.d = d;
        s.p_ij = static_cast<double>(n_ij) / static_cast<double>(n_j);
        s.p_i = static_cast<double>(n_i) / static_cast<double>(n);
        s.p_tilde = n_j < n ? static_cast<double>(n_i - n_ij) / static_cast<double>(n - n_j) : 0.0;
        s.p_check = s.p_ij + 1.0 / static_cast<double>(n_j);
        return s;
    }

    friend bool operator==(const CellStats&, const CellStats&) = default;
};

} // namespace fishtf
