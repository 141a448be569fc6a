// Outage of best-of-K selection with three-element surfaces, closed form next to
// simulation, and the sum-rate scaling estimate for a few K.

#include <cstdio>

#include "risnet/risnet.hpp"

int main() {
    using namespace risnet;

    const double threshold = db_to_linear(20.0);
    const MGDistribution mg = build_mg(fit_kg(3));

    std::printf("avg_snr_db  K  exact        mc           mc_stderr\n");
    for (int k = 1; k <= 3; ++k) {
        for (double db = 20.0; db <= 35.0; db += 5.0) {
            const auto config = SystemConfig::with_avg_snr(k, 3, db_to_linear(db), threshold);
            const auto mc = mc_outage(config, 100000, {42, 3});
            std::printf("%-10g  %d  %-11.4e  %-11.4e  %.2e\n", db, k, outage_exact(mg, threshold, config.avg_snr, k),
                        mc.estimate, mc.std_error);
        }
    }

    std::printf("\nsum-rate at 10 dB, N = 10\n  K  mc       log2(1+h_K)\n");
    for (int k : {2, 5, 10, 20}) {
        const auto config = SystemConfig::with_avg_snr(k, 10, db_to_linear(10.0), 1.0);
        const auto mc = mc_sum_rate(config, 100000, {42, 10});
        const auto evt = asymptotic_sum_rate(k, 10, config.avg_snr, ChernoffParams(kDefaultTheta));
        std::printf("%3d  %-7.4f  %.4f\n", k, mc.estimate, evt.sum_rate_full);
    }
    return 0;
}
