#pragma once

#include <cmath>
#include <limits>

namespace roughcb::detail
{
    // Root of an increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi).
    // Newton steps are taken from the current iterate; a step that leaves the
    // bracket, or that fails to halve |g|, counts as non-contracting and after
    // max_stalls of those the iteration falls back to bisection for good.
    template <class G, class DG>
    double safeguarded_newton(G&& g, DG&& dg, double lo, double hi, double start, int max_stalls = 8)
    {
        double x = start;
        double gx = g(x);
        int stalls = 0;
        for (int iter = 0; iter < 400; ++iter)
        {
            if (gx == 0.0)
            {
                return x;
            }
            if (gx < 0.0)
            {
                lo = x;
            }
            else
            {
                hi = x;
            }
            if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi))
            {
                break;
            }

            double next = 0.5 * (lo + hi);
            if (stalls < max_stalls)
            {
                const double slope = dg(x);
                const double newton = slope > 0.0 ? x - gx / slope : next;
                if (newton > lo && newton < hi)
                {
                    next = newton;
                }
                else
                {
                    ++stalls;
                }
            }
            const double g_next = g(next);
            if (stalls < max_stalls && std::abs(g_next) > 0.5 * std::abs(gx))
            {
                ++stalls;
            }
            if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(next))
            {
                return std::abs(g_next) < std::abs(gx) ? next : x;
            }
            x = next;
            gx = g_next;
        }
        return x;
    }
}
