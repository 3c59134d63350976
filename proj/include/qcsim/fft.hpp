#ifndef QCSIM_FFT_HPP
#define QCSIM_FFT_HPP

#include <complex>
#include <cstddef>

namespace qcsim {

// FFTW wrapper holding forward/inverse plans for one transform size.
// Convention: inverse(forward(psi)) == psi (the inverse carries the 1/n).
// Plan creation is serialized internally (FFTW requirement); execution on
// distinct buffers is safe from any thread. Plans use FFTW_ESTIMATE so that
// results are reproducible run to run.
class Fft {
  public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    void forward(std::complex<double>* data) const;  // unnormalized
    void inverse(std::complex<double>* data) const;  // scales by 1/n

  private:
    std::size_t n_;
    void* fwd_;  // fftw_plan
    void* inv_;
};

}  // namespace qcsim

#endif
