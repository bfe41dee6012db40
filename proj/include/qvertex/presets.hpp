#pragma once

#include <qvertex/cases.hpp>

#include <string_view>
#include <vector>

namespace qvertex {

struct Preset {
    std::string_view name;
    std::string_view description;
    CaseParameters params;
};

/// fig2, fig4, fig5, fig6, fig8, fig9, fig10.
const std::vector<Preset>& presets();

/// Throws IndexError for an unknown name.
const Preset& preset(std::string_view name);

} // namespace qvertex
