// Copyright (c) 2026 The trisecant authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRISECANT_ERROR_HPP
#define TRISECANT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace trisecant
{

enum class errc {
    // input errors
    not_symmetric,
    not_positive_definite,
    non_finite,
    invalid_eps,
    duplicate_branch_points,
    too_few_points,
    config_invalid,
    shape_mismatch,
    dimension_mismatch,
    k_too_large,
    out_of_range,
    unknown_command,
    bad_flag,
    missing_input,
    io_failure,
    // numerical failures
    convergence_budget_exceeded,
    quadrature_failure,
    homology_construction_failure,
    all_coordinates_vanish,
    budget_exceeded,
};

constexpr std::string_view errc_name(errc e) noexcept
{
    switch (e) {
        case errc::not_symmetric: return "NotSymmetric";
        case errc::not_positive_definite: return "NotPositiveDefinite";
        case errc::non_finite: return "NonFinite";
        case errc::invalid_eps: return "InvalidEps";
        case errc::duplicate_branch_points: return "DuplicateBranchPoints";
        case errc::too_few_points: return "TooFewPoints";
        case errc::config_invalid: return "ConfigInvalid";
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::k_too_large: return "KTooLarge";
        case errc::out_of_range: return "OutOfRange";
        case errc::unknown_command: return "UnknownCommand";
        case errc::bad_flag: return "BadFlag";
        case errc::missing_input: return "MissingInput";
        case errc::io_failure: return "IoFailure";
        case errc::convergence_budget_exceeded: return "ConvergenceBudgetExceeded";
        case errc::quadrature_failure: return "QuadratureFailure";
        case errc::homology_construction_failure: return "HomologyConstructionFailure";
        case errc::all_coordinates_vanish: return "AllCoordinatesVanish";
        case errc::budget_exceeded: return "BudgetExceeded";
    }
    return "Unknown";
}

// Failures of the numerics proper, as opposed to bad input.
constexpr bool is_numerical(errc e) noexcept
{
    switch (e) {
        case errc::convergence_budget_exceeded:
        case errc::quadrature_failure:
        case errc::homology_construction_failure:
        case errc::all_coordinates_vanish:
        case errc::budget_exceeded:
            return true;
        default:
            return false;
    }
}

class error : public std::runtime_error
{
public:
    error(errc code, const std::string &what) : std::runtime_error(what), m_code(code) {}

    errc code() const noexcept
    {
        return m_code;
    }

private:
    errc m_code;
};

} // namespace trisecant

#endif
