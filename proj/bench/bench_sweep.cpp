// Serial vs OpenMP timing of the per-point kernels.
#include <lck/hopf.hpp>
#include <lck/verify.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

namespace {

double seconds(const std::function<void()>& f, int reps)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, const std::function<void(lck::Exec)>& kernel, int reps)
{
    const double s = seconds([&] { kernel(lck::Exec::serial); }, reps);
    const double p = seconds([&] { kernel(lck::Exec::parallel); }, reps);
    std::printf("%-28s %10.4f %10.4f %8.2fx\n", name, s, p, s / p);
}

} // namespace

int main(int argc, char** argv)
{
    const std::size_t points = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4000;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

    const auto ex1 = lck::example1_entry({2.0, 0.0});
    const std::vector<double> r{1.0, 1.5}, p{1.0, 2.0};
    const auto vai = lck::vaisman_entry(r, p);
    const auto s2 = lck::annulus_samples(2, points, 42);

    const auto ex1_defect = lck::exterior_d(ex1.form("Omega")) - lck::wedge(ex1.form("theta"), ex1.form("Omega"));
    const auto vai_defect = lck::exterior_d(vai.form("Omega")) - lck::wedge(vai.form("theta"), vai.form("Omega"));
    const lck::LeeSolver lee(vai.form("Omega"));

    Eigen::MatrixXcd a(2, 2);
    a << 0.7, 1.0, 0.0, 0.7;
    const auto g = lck::PolyAutomorphism::linear(a);
    const auto starts = lck::sphere_points(2, points, 2.0, 42);

    std::printf("points=%zu reps=%d\n", points, reps);
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial[s]", "omp[s]", "speedup");
    row("example1 lck residual", [&](lck::Exec e) { lck::residual_profile(ex1_defect, s2.points, e); }, reps);
    row("vaisman lck residual", [&](lck::Exec e) { lck::residual_profile(vai_defect, s2.points, e); }, reps);
    row("vaisman definiteness", [&](lck::Exec e) {
        lck::DefinitenessOptions o;
        o.exec = e;
        lck::definiteness(vai.form("Omega"), s2.points, o);
    }, reps);
    row("vaisman lee solve", [&](lck::Exec e) {
        lck::sweep::map_indexed(points, [&](std::size_t i) { return lee(s2.points[i]).residual; }, e);
    }, reps);
    row("jordan-block orbits", [&](lck::Exec e) { lck::orbit_iterations(g, starts, 1e-6, 10000, 1e6, e); }, reps);
    return 0;
}
