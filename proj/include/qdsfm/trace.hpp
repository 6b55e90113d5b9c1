#pragma once

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <vector>

namespace qdsfm {

struct TracePoint
{
    std::size_t iteration = 0;
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double seconds = 0.0;
};

struct ConvergenceTrace
{
    std::size_t stride = 1;
    std::vector<TracePoint> points;

    bool empty() const { return points.empty(); }
    const TracePoint& back() const { return points.back(); }

    /// CSV with columns iter,primal,dual,gap,seconds.  Values use 17
    /// significant digits so identical runs give identical rows.
    void write_csv(std::ostream& os, bool with_header = true) const
    {
        if (with_header) os << "iter,primal,dual,gap,seconds\n";
        const auto flags = os.flags();
        const auto prec = os.precision();
        os << std::setprecision(17);
        for (const auto& p : points)
            os << p.iteration << ',' << p.primal << ',' << p.dual << ',' << p.gap << ',' << p.seconds << '\n';
        os.flags(flags);
        os.precision(prec);
    }
};

}  // namespace qdsfm
