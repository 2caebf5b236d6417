#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ciw {

namespace {

struct Plans {
    fftw_plan fwd = nullptr;   // r2c
    fftw_plan bwd = nullptr;   // c2r
    fftw_plan cinv = nullptr;  // full c2c backward
};

// The FFTW planner is not thread safe; plans are cached per (d, n) and
// executed with the new-array interface on caller buffers.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    Plans get(const Grid& g) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(g.dim(), g.n());
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        int rank = g.dim();
        std::vector<int> dims(rank, g.n());
        std::vector<double> rbuf(g.points());
        std::vector<cplx> cbuf(g.spec_size());
        std::vector<cplx> fbuf(g.points());
        Plans p;
        p.fwd = fftw_plan_dft_r2c(rank, dims.data(), rbuf.data(),
                                  reinterpret_cast<fftw_complex*>(cbuf.data()),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_c2r(rank, dims.data(),
                                  reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data(),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.cinv = fftw_plan_dft(rank, dims.data(), reinterpret_cast<fftw_complex*>(fbuf.data()),
                               reinterpret_cast<fftw_complex*>(fbuf.data()), FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p.fwd || !p.bwd || !p.cinv) throw Error("fftw plan creation failed");
        plans_[key] = p;
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::pair<int, int>, Plans> plans_;
};

// Nodes start at -pi, so the e^{i xi.x} coefficient differs from the raw DFT
// coefficient by (-1)^(sum xi_a); the parity equals that of the storage index.
int half_index_parity(const Grid& g, std::int64_t idx) {
    int parity = static_cast<int>(idx % g.spec_last());
    idx /= g.spec_last();
    for (int a = 0; a < g.dim() - 1; ++a) {
        parity += static_cast<int>(idx % g.n());
        idx /= g.n();
    }
    return parity & 1;
}

int full_index_parity(const Grid& g, std::int64_t idx) {
    int parity = 0;
    for (int a = 0; a < g.dim(); ++a) {
        parity += static_cast<int>(idx % g.n());
        idx /= g.n();
    }
    return parity & 1;
}

}  // namespace

std::vector<cplx> fft_forward(const Grid& g, const std::vector<double>& phys) {
    if (static_cast<std::int64_t>(phys.size()) != g.points())
        throw Error("fft_forward: size mismatch");
    Plans p = PlanCache::instance().get(g);
    std::vector<double> in(phys);  // r2c may clobber its input
    std::vector<cplx> out(g.spec_size());
    fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    const double s = 1.0 / static_cast<double>(g.points());
    for (std::int64_t i = 0; i < g.spec_size(); ++i)
        out[i] *= half_index_parity(g, i) ? -s : s;
    return out;
}

std::vector<double> fft_inverse(const Grid& g, const std::vector<cplx>& coef) {
    if (static_cast<std::int64_t>(coef.size()) != g.spec_size())
        throw Error("fft_inverse: size mismatch");
    Plans p = PlanCache::instance().get(g);
    std::vector<cplx> in(coef);
    for (std::int64_t i = 0; i < g.spec_size(); ++i)
        if (half_index_parity(g, i)) in[i] = -in[i];
    std::vector<double> out(g.points());
    fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    return out;
}

std::vector<cplx> fft_full_inverse(const Grid& g, const std::vector<cplx>& full_coef) {
    if (static_cast<std::int64_t>(full_coef.size()) != g.points())
        throw Error("fft_full_inverse: size mismatch");
    Plans p = PlanCache::instance().get(g);
    std::vector<cplx> buf(full_coef);
    for (std::int64_t i = 0; i < g.points(); ++i)
        if (full_index_parity(g, i)) buf[i] = -buf[i];
    fftw_execute_dft(p.cinv, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    return buf;
}

}  // namespace ciw
