// Writes the small binary field fixtures the CLI smoke tests read back:
//   slab.htf   band-limited slab data (no seam gluing) at 32x32x32
//   const.htf  the glued constant-1 field at 32x32x32
//   psin.htf   a fiber-constant sine wave at 32x32x64
// Usage: mkfield <output-dir>

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "hypertorus/circle.hpp"
#include "hypertorus/gluing.hpp"
#include "hypertorus/io.hpp"
#include "hypertorus/scalar_field.hpp"
#include "hypertorus/synth.hpp"

int main(int argc, char** argv) {
    using namespace hypertorus;
    if (argc != 2) {
        std::fprintf(stderr, "usage: mkfield <output-dir>\n");
        return 1;
    }
    try {
        const std::filesystem::path dir(argv[1]);
        std::filesystem::create_directories(dir);

        const auto g = HyperbolicGluing::from_matrix(Mat2i{{2, 1, 1, 1}});

        Rng rng(13);
        const ScalarField slab = random_slab_field(g, GridShape{32, 32}, rng, 5, 3);
        write_field((dir / "slab.htf").string(), slab);

        const ScalarField ones = from_function(
            g, GridShape{32, 32}, false, [](double, double, double) { return cplx{1.0, 0.0}; });
        write_field((dir / "const.htf").string(), ones);

        const ScalarField psin =
            pullback_circle(g, GridShape{32, 64}, CircleFunction::sine(1));
        write_field((dir / "psin.htf").string(), psin);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mkfield: %s\n", e.what());
        return 1;
    }
    return 0;
}
