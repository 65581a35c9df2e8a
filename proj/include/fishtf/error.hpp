#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fishtf {

enum class Errc {
    empty_collection,
    duplicate_doc_id,
    negative_count,
    duplicate_cell,
    index_out_of_range,
    invalid_params,
    invalid_choose,
    invalid_probability,
    oracle_domain_exceeded,
    bound_inapplicable,
    undefined_weight,
    undefined_quotient,
    undefined_phi,
    spec_invalid,
    parse_error,
    io_error,
};

constexpr std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::empty_collection: return "EmptyCollection";
    case Errc::duplicate_doc_id: return "DuplicateDocId";
    case Errc::negative_count: return "NegativeCount";
    case Errc::duplicate_cell: return "DuplicateCell";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::invalid_choose: return "InvalidChoose";
    case Errc::invalid_probability: return "InvalidProbability";
    case Errc::oracle_domain_exceeded: return "OracleDomainExceeded";
    case Errc::bound_inapplicable: return "BoundInapplicable";
    case Errc::undefined_weight: return "UndefinedWeight";
    case Errc::undefined_quotient: return "UndefinedQuotient";
    case Errc::undefined_phi: return "UndefinedPhi";
    case Errc::spec_invalid: return "SpecInvalid";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IOError";
    }
    return "Unknown";
}

// Every failure raised by the library carries one of the codes above; the
// message is prefixed with the code name so diagnostics stay greppable.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace fishtf
