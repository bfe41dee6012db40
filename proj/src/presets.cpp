#include <qvertex/presets.hpp>

#include <cmath>
#include <string>

namespace qvertex {

const std::vector<Preset>& presets()
{
    static const double h = 1.0 / std::sqrt(2.0);
    static const std::vector<Preset> all{
        {"fig2", "pure delta between all lines: t2 = t3 = 1/sqrt(2), s = 2",
         cases::DeltaY{2.0, h, h}},
        {"fig4", "delta-delta-delta' : t1 = t2 = 1/sqrt(2), s11 = s12 = s22 = 1",
         cases::MixedY{1.0, 1.0, 1.0, h, h, false}},
        {"fig5", "delta-delta'-delta' : t1 = 1/3, t2 = 0, s11 = 6, s12 = 2, s22 = 2/3",
         cases::MixedY{6.0, 2.0, 2.0 / 3.0, 1.0 / 3.0, 0.0, false}},
        {"fig6", "rank(B) = 2, rank(A) = 3: t1 = t2 = 1/sqrt(2), s11 = s12 = 1, s22 = -2",
         cases::MixedY{1.0, 1.0, -2.0, h, h, false}},
        {"fig8", "pure delta' between all lines: all s_ij = 1",
         cases::GenericY{1.0, 1.0, 1.0, 1.0, 1.0, 1.0}},
        {"fig9", "rank(B) = 3, rank(A) = 2: s11 = s12 = s22 = s33 = 1, s13 = s23 = 2",
         cases::GenericY{1.0, 1.0, 2.0, 1.0, 2.0, 1.0}},
        {"fig10", "generic rank(B) = rank(A) = 3: s11 = -1/3, s12 = -1, s13 = 1, s22 = 1, s23 = -3, s33 = -4",
         cases::GenericY{-1.0 / 3.0, -1.0, 1.0, 1.0, -3.0, -4.0}},
    };
    return all;
}

const Preset& preset(std::string_view name)
{
    for (const auto& p : presets())
        if (p.name == name)
            return p;
    throw IndexError("unknown preset '" + std::string(name) + "'");
}

} // namespace qvertex
