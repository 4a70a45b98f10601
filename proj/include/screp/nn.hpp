#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "screp/matrix.hpp"
#include "screp/rng.hpp"

namespace screp::nn {

// Gate order used throughout: input, forget, cell candidate, output.
enum Gate { kInput = 0, kForget = 1, kCell = 2, kOutput = 3 };

struct LstmParams {
    std::array<Matrix2D, 4> w;            // lstm_size x input_width
    std::array<Matrix2D, 4> u;            // lstm_size x lstm_size
    std::array<std::vector<double>, 4> b; // lstm_size
    // diagonal peephole connections; input/forget gates peek at c_{t-1},
    // the output gate at c_t
    std::vector<double> p_input, p_forget, p_output;
};

struct ModelSpec {
    std::size_t input_width = 0;
    std::optional<std::size_t> embed_size; // present only for the built-in
                                           // embedding-layer variant
    std::size_t lstm_size = 0;
    std::size_t fc_size = 0;
    std::size_t output_size = 2;
    double dropout_keep = 0.8;

    void validate() const;
    std::size_t lstm_input_width() const {
        return embed_size ? *embed_size : input_width;
    }
};

struct TrainConfig {
    std::size_t epochs = 20;
    std::size_t batch_size = 64;
    double learning_rate = 0.001;
    std::uint64_t seed = 1;
};

enum class Mode { train, eval };

struct TensorRef {
    std::string name;
    double* data;
    std::size_t size;
};

// All trainable tensors of one classifier; doubles as the gradient
// container so optimizer state and gradients share one layout.
struct ParamSet {
    std::optional<Matrix2D> embed_w;           // embed_size x input_width
    std::optional<std::vector<double>> embed_b;
    LstmParams lstm;
    Matrix2D fc_w;              // fc_size x lstm_size
    std::vector<double> fc_b;
    Matrix2D out_w;             // output_size x fc_size
    std::vector<double> out_b;

    static ParamSet zeros(const ModelSpec& spec);

    std::vector<TensorRef> tensors(); // stable order and naming
    void add_scaled(const ParamSet& other, double factor);
    void scale(double factor);
    bool all_finite() const;
};

std::vector<double> softmax(const std::vector<double>& logits);

// Forward intermediates needed for backpropagation through time.
struct ForwardCache {
    Matrix2D x;                   // raw input, T x input_width
    Matrix2D embedded;            // T x embed_size (empty when no embedding)
    std::array<Matrix2D, 4> gate; // sigma/tanh activations per timestep
    Matrix2D c, tanh_c, h;        // T x lstm_size
    std::vector<double> fc_hidden;   // tanh activations
    std::vector<double> dropout_mask; // multiplier per fc unit (1 or 1/keep)
    std::vector<double> fc_dropped;
    std::vector<double> logits;
    std::vector<double> probs;
};

class SequenceClassifier {
public:
    // Seed-determined init: weights uniform(-a, a) with a = sqrt(6/(fan_in +
    // fan_out)), biases zero except forget-gate bias 1, peepholes zero.
    SequenceClassifier(ModelSpec spec, std::uint64_t seed);
    SequenceClassifier(ModelSpec spec, ParamSet params);

    const ModelSpec& spec() const { return spec_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }

    // rng drives the dropout mask and is only drawn from in train mode.
    std::pair<std::vector<double>, ForwardCache> forward(const Matrix2D& x, Mode mode,
                                                         Rng& rng) const;
    std::vector<double> predict(const Matrix2D& x) const;

    // Cross-entropy loss of a forward pass re-evaluated with a fixed dropout
    // mask (nullptr = eval mode); the finite-difference path of grad_check.
    double loss_with_mask(const Matrix2D& x, int label,
                          const std::vector<double>* mask) const;

    // Exact gradients of the cross-entropy loss at `cache` for every
    // parameter, peepholes and embedding layer included.
    ParamSet backward(const ForwardCache& cache, int label) const;

private:
    ForwardCache run_forward(const Matrix2D& x, const std::vector<double>* mask) const;

    ModelSpec spec_;
    ParamSet params_;
};

// Standalone peephole LSTM recurrence, exposed for direct shape/value tests.
// Returns the hidden states (T x lstm_size) and writes the final (h, c).
Matrix2D lstm_forward(const Matrix2D& x, const LstmParams& params,
                      const std::vector<double>& h0, const std::vector<double>& c0,
                      std::vector<double>* h_final = nullptr,
                      std::vector<double>* c_final = nullptr);

double cross_entropy(const std::vector<double>& probs, int label);

class AdamOptimizer {
public:
    AdamOptimizer(const ModelSpec& spec, double learning_rate,
                  double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    // Applies one update; throws NumericError on non-finite gradients.
    void step(ParamSet& params, const ParamSet& grads);

    std::size_t steps_taken() const { return step_; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::size_t step_ = 0;
    ParamSet m_, v_;
};

struct GradCheckOptions {
    std::size_t sequence_length = 4;
    double epsilon = 1e-5;
    bool corrupt_forget_gate = false; // harness self-test fault injection
};

// Builds a seeded random model + example and returns the worst relative
// error between analytic and central-difference gradients over all
// parameters.
double grad_check(const ModelSpec& spec, std::uint64_t seed,
                  const GradCheckOptions& options = {});

// Versioned text container; hex floats make the round-trip exact.
void save_checkpoint(std::ostream& out, const SequenceClassifier& model);
SequenceClassifier load_checkpoint(std::istream& in);
void save_checkpoint_file(const std::string& path, const SequenceClassifier& model);
SequenceClassifier load_checkpoint_file(const std::string& path);

} // namespace screp::nn
