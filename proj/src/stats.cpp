#include "roughcb/stats.hpp"

#include "roughcb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace roughcb
{
    namespace
    {
        void check_nonempty(std::span<const double> samples, const char* who)
        {
            if (samples.empty())
            {
                throw DomainError(std::string(who) + ": empty sample");
            }
        }

        // Mean and population standard error of f(x) over the sample.
        template <class F>
        Estimate mean_of(std::span<const double> samples, F&& f)
        {
            const double n = static_cast<double>(samples.size());
            double mean = 0.0;
            for (double x : samples)
            {
                mean += f(x);
            }
            mean /= n;
            double ss = 0.0;
            for (double x : samples)
            {
                const double d = f(x) - mean;
                ss += d * d;
            }
            return {mean, std::sqrt(ss / n) / std::sqrt(n)};
        }
    }

    Estimate empirical_survival(std::span<const double> samples, double x)
    {
        check_nonempty(samples, "empirical_survival");
        const auto above = std::count_if(samples.begin(), samples.end(), [x](double s) { return s > x; });
        const double n = static_cast<double>(samples.size());
        const double p = static_cast<double>(above) / n;
        return {p, std::sqrt(p * (1.0 - p) / n)};
    }

    Estimate empirical_laplace(std::span<const double> samples, double lambda)
    {
        check_nonempty(samples, "empirical_laplace");
        if (!(lambda >= 0.0))
        {
            throw DomainError("empirical_laplace: lambda must be >= 0");
        }
        return mean_of(samples, [lambda](double x) { return std::exp(-lambda * x); });
    }

    Estimate empirical_mean(std::span<const double> samples)
    {
        check_nonempty(samples, "empirical_mean");
        return mean_of(samples, [](double x) { return x; });
    }

    SlopeFit loglog_slope(std::span<const double> samples, double q_lo, double q_hi, const std::vector<bool>& censored)
    {
        if (!(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0))
        {
            throw DomainError("loglog_slope: need 0 < q_lo < q_hi < 1");
        }
        if (!censored.empty() && censored.size() != samples.size())
        {
            throw DomainError("loglog_slope: censoring mask has the wrong length");
        }
        SlopeFit fit;
        std::vector<double> x;
        x.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            if (!censored.empty() && censored[i])
            {
                ++fit.excluded;
                continue;
            }
            x.push_back(samples[i]);
        }
        std::sort(x.begin(), x.end(), std::greater<>());
        const auto n = x.size();
        const double nd = static_cast<double>(n);

        // x[k-1] is the k-th largest value; its empirical quantile is
        // (n - k + 1)/n. Window: k_min <= k <= k_max.
        const auto k_min = static_cast<std::size_t>(std::ceil(nd * (1.0 - q_hi) - 1e-9) + 1.0);
        const auto k_max = static_cast<std::size_t>(std::floor(nd * (1.0 - q_lo) + 1e-9) + 1.0);
        if (n == 0 || k_max < k_min + 99 || k_max > n)
        {
            throw EstimationError("loglog_slope: fewer than 100 points in the quantile window");
        }
        const std::size_t m = k_max - k_min + 1;
        if (!(x[k_max - 1] > 0.0))
        {
            throw DomainError("loglog_slope: samples in the quantile window must be > 0");
        }
        if (x[k_min - 1] == x[k_max - 1])
        {
            throw EstimationError("loglog_slope: degenerate design (all values in the window equal)");
        }

        // Regress log x_(k) on the exponential scores l_k = sum_{j=k}^{n} 1/j =
        // E[-log U_(k)], the expected minus-log survival of the k-th largest
        // point. For data with P{X > x} ~ C x^{-a} the fitted coefficient
        // estimates 1/a without the plotting-position bias of log(k/n).
        std::vector<double> score(m);
        {
            double tail = 0.0;
            for (std::size_t j = n; j >= k_min; --j)
            {
                tail += 1.0 / static_cast<double>(j);
                if (j <= k_max)
                {
                    score[j - k_min] = tail;
                }
            }
        }
        double ms = 0.0;
        double my = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            ms += score[i];
            my += std::log(x[k_min - 1 + i]);
        }
        ms /= static_cast<double>(m);
        my /= static_cast<double>(m);
        double sss = 0.0;
        double ssy = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            sss += (score[i] - ms) * (score[i] - ms);
            ssy += (score[i] - ms) * (std::log(x[k_min - 1 + i]) - my);
        }
        const double inv_a = ssy / sss;
        if (!(inv_a > 0.0))
        {
            throw EstimationError("loglog_slope: nonpositive fitted tail index");
        }
        fit.slope = -1.0 / inv_a;

        // Renyi: log x_(k) = const + (1/a) sum_{j>=k} E_j / j with iid standard
        // exponentials E_j, so the coefficient is (1/a) sum_j E_j c_j with
        // c_j = (1/j) sum_{k in window, k <= j} w_k, w_k the regression weights.
        double var = 0.0;
        double cumulative = 0.0;
        for (std::size_t j = k_min; j < k_max; ++j)
        {
            cumulative += (score[j - k_min] - ms) / sss;
            const double c = cumulative / static_cast<double>(j);
            var += c * c;
        }
        // se(1/a) = (1/a) sqrt(var); delta method for a = 1/(1/a).
        fit.std_error = std::sqrt(var) / inv_a;
        fit.points = static_cast<std::int64_t>(m);
        return fit;
    }

    SlopeFit two_point_slope(std::span<const double> samples, double x_lo, double x_hi)
    {
        check_nonempty(samples, "two_point_slope");
        if (!(x_lo > 0.0 && x_hi > x_lo))
        {
            throw DomainError("two_point_slope: need 0 < x_lo < x_hi");
        }
        const double n = static_cast<double>(samples.size());
        const double s_lo = empirical_survival(samples, x_lo).value;
        const double s_hi = empirical_survival(samples, x_hi).value;
        if (!(s_hi > 0.0))
        {
            throw EstimationError("two_point_slope: no sample above x_hi");
        }
        SlopeFit fit;
        const double span = std::log(x_hi / x_lo);
        fit.slope = std::log(s_hi / s_lo) / span;
        // Var(log S_hi - log S_lo) for nested binomial events.
        const double var = (1.0 - s_hi) / (n * s_hi) - (1.0 - s_lo) / (n * s_lo);
        fit.std_error = std::sqrt(std::max(var, 0.0)) / span;
        fit.points = 2;
        return fit;
    }

    ReportRow make_row(std::string name, double analytic, Estimate empirical, double tolerance, double z_crit,
                       Sidedness sidedness)
    {
        ReportRow row;
        row.name = std::move(name);
        row.analytic = analytic;
        row.empirical = empirical.value;
        row.std_error = empirical.se;
        row.tolerance = tolerance;
        row.z_crit = z_crit;
        row.sidedness = sidedness;
        const double diff = empirical.value - analytic;
        if (empirical.se > 0.0)
        {
            row.z = diff / empirical.se;
        }
        else if (diff == 0.0)
        {
            row.z = 0.0;
        }
        else
        {
            row.z = std::copysign(std::numeric_limits<double>::infinity(), diff);
        }
        if (sidedness == Sidedness::two_sided)
        {
            row.pass = std::abs(row.z) <= z_crit || std::abs(diff) <= tolerance;
        }
        else
        {
            row.pass = row.z <= z_crit || diff <= tolerance;
        }
        return row;
    }

    bool ComparisonReport::all_pass() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
    }

    Estimate estimate(std::span<const double> samples, const FunctionalSpec& spec)
    {
        switch (spec.kind)
        {
        case Functional::laplace:
            return empirical_laplace(samples, spec.argument);
        case Functional::survival:
            return empirical_survival(samples, spec.argument);
        case Functional::mean:
            return empirical_mean(samples);
        }
        throw DomainError("estimate: unknown functional");
    }

    ComparisonReport build_report(const std::vector<Comparison>& pairs)
    {
        ComparisonReport report;
        for (const Comparison& c : pairs)
        {
            report.rows.push_back(make_row(c.name, c.analytic, estimate(c.samples, c.spec), c.spec.tolerance));
        }
        return report;
    }
}
