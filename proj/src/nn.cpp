#include "screp/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "screp/errors.hpp"

namespace screp::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void fill_uniform(Matrix2D& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.values()) v = rng.uniform(-a, a);
}

} // namespace

void ModelSpec::validate() const {
    if (input_width == 0 || lstm_size == 0 || fc_size == 0)
        throw ValidationError("model spec: sizes must be >= 1");
    if (embed_size && *embed_size == 0)
        throw ValidationError("model spec: embedding size must be >= 1");
    if (output_size != 2)
        throw ValidationError("model spec: output size must be 2");
    if (!(dropout_keep > 0.0 && dropout_keep <= 1.0))
        throw ValidationError("model spec: dropout keep probability must be in (0,1]");
}

ParamSet ParamSet::zeros(const ModelSpec& spec) {
    ParamSet p;
    if (spec.embed_size) {
        p.embed_w = Matrix2D(*spec.embed_size, spec.input_width);
        p.embed_b = std::vector<double>(*spec.embed_size, 0.0);
    }
    const std::size_t in = spec.lstm_input_width();
    const std::size_t n = spec.lstm_size;
    for (int g = 0; g < 4; ++g) {
        p.lstm.w[g] = Matrix2D(n, in);
        p.lstm.u[g] = Matrix2D(n, n);
        p.lstm.b[g].assign(n, 0.0);
    }
    p.lstm.p_input.assign(n, 0.0);
    p.lstm.p_forget.assign(n, 0.0);
    p.lstm.p_output.assign(n, 0.0);
    p.fc_w = Matrix2D(spec.fc_size, n);
    p.fc_b.assign(spec.fc_size, 0.0);
    p.out_w = Matrix2D(spec.output_size, spec.fc_size);
    p.out_b.assign(spec.output_size, 0.0);
    return p;
}

std::vector<TensorRef> ParamSet::tensors() {
    std::vector<TensorRef> t;
    auto mat = [&t](const char* name, Matrix2D& m) {
        t.push_back({name, m.data(), m.size()});
    };
    auto vec = [&t](const char* name, std::vector<double>& v) {
        t.push_back({name, v.data(), v.size()});
    };
    if (embed_w) mat("embed.w", *embed_w);
    if (embed_b) vec("embed.b", *embed_b);
    static const char* wn[4] = {"lstm.w_input", "lstm.w_forget", "lstm.w_cell",
                                "lstm.w_output"};
    static const char* un[4] = {"lstm.u_input", "lstm.u_forget", "lstm.u_cell",
                                "lstm.u_output"};
    static const char* bn[4] = {"lstm.b_input", "lstm.b_forget", "lstm.b_cell",
                                "lstm.b_output"};
    for (int g = 0; g < 4; ++g) mat(wn[g], lstm.w[g]);
    for (int g = 0; g < 4; ++g) mat(un[g], lstm.u[g]);
    for (int g = 0; g < 4; ++g) vec(bn[g], lstm.b[g]);
    vec("lstm.p_input", lstm.p_input);
    vec("lstm.p_forget", lstm.p_forget);
    vec("lstm.p_output", lstm.p_output);
    mat("fc.w", fc_w);
    vec("fc.b", fc_b);
    mat("out.w", out_w);
    vec("out.b", out_b);
    return t;
}

void ParamSet::add_scaled(const ParamSet& other, double factor) {
    auto mine = tensors();
    auto theirs = const_cast<ParamSet&>(other).tensors();
    if (mine.size() != theirs.size())
        throw ValidationError("parameter sets have different structure");
    for (std::size_t i = 0; i < mine.size(); ++i) {
        if (mine[i].size != theirs[i].size)
            throw ValidationError("parameter tensor shape mismatch: " + mine[i].name);
        for (std::size_t k = 0; k < mine[i].size; ++k)
            mine[i].data[k] += factor * theirs[i].data[k];
    }
}

void ParamSet::scale(double factor) {
    for (auto& t : tensors())
        for (std::size_t k = 0; k < t.size; ++k) t.data[k] *= factor;
}

bool ParamSet::all_finite() const {
    auto ts = const_cast<ParamSet*>(this)->tensors();
    for (const auto& t : ts)
        for (std::size_t k = 0; k < t.size; ++k)
            if (!std::isfinite(t.data[k])) return false;
    return true;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double z = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        z += p[i];
    }
    for (auto& x : p) x /= z;
    return p;
}

double cross_entropy(const std::vector<double>& probs, int label) {
    return -std::log(probs.at(static_cast<std::size_t>(label)));
}

SequenceClassifier::SequenceClassifier(ModelSpec spec, std::uint64_t seed)
    : spec_(spec), params_(ParamSet::zeros(spec)) {
    spec_.validate();
    Rng rng(seed);
    const std::size_t in = spec_.lstm_input_width();
    const std::size_t n = spec_.lstm_size;
    if (params_.embed_w)
        fill_uniform(*params_.embed_w, spec_.input_width, *spec_.embed_size, rng);
    for (int g = 0; g < 4; ++g) fill_uniform(params_.lstm.w[g], in, n, rng);
    for (int g = 0; g < 4; ++g) fill_uniform(params_.lstm.u[g], n, n, rng);
    // forget-gate bias starts at 1 so long-range memory is trainable early
    params_.lstm.b[kForget].assign(n, 1.0);
    fill_uniform(params_.fc_w, n, spec_.fc_size, rng);
    fill_uniform(params_.out_w, spec_.fc_size, spec_.output_size, rng);
}

SequenceClassifier::SequenceClassifier(ModelSpec spec, ParamSet params)
    : spec_(spec), params_(std::move(params)) {
    spec_.validate();
}

Matrix2D lstm_forward(const Matrix2D& x, const LstmParams& params,
                      const std::vector<double>& h0, const std::vector<double>& c0,
                      std::vector<double>* h_final, std::vector<double>* c_final) {
    const std::size_t n = params.b[kInput].size();
    const std::size_t T = x.rows();
    if (params.w[kInput].cols() != x.cols())
        throw ValidationError("lstm_forward: input width mismatch");
    if (h0.size() != n || c0.size() != n)
        throw ValidationError("lstm_forward: state size mismatch");

    Matrix2D h(T, n);
    std::vector<double> h_prev = h0, c_prev = c0, c_t(n), a(n);
    std::array<std::vector<double>, 4> act;
    for (auto& v : act) v.resize(n);

    for (std::size_t t = 0; t < T; ++t) {
        for (int g = 0; g < 4; ++g) {
            a = params.b[g];
            add_matvec(params.w[g], x.row(t), a.data());
            add_matvec(params.u[g], h_prev.data(), a.data());
            if (g == kInput)
                for (std::size_t k = 0; k < n; ++k) a[k] += params.p_input[k] * c_prev[k];
            if (g == kForget)
                for (std::size_t k = 0; k < n; ++k) a[k] += params.p_forget[k] * c_prev[k];
            if (g != kOutput) { // output gate sees c_t, handled below
                for (std::size_t k = 0; k < n; ++k)
                    act[g][k] = g == kCell ? std::tanh(a[k]) : sigmoid(a[k]);
            } else {
                act[kOutput] = a; // pre-activation, finished after c_t
            }
        }
        for (std::size_t k = 0; k < n; ++k)
            c_t[k] = act[kForget][k] * c_prev[k] + act[kInput][k] * act[kCell][k];
        for (std::size_t k = 0; k < n; ++k)
            act[kOutput][k] = sigmoid(act[kOutput][k] + params.p_output[k] * c_t[k]);
        for (std::size_t k = 0; k < n; ++k)
            h(t, k) = act[kOutput][k] * std::tanh(c_t[k]);
        h_prev.assign(h.row(t), h.row(t) + n);
        c_prev = c_t;
    }
    if (h_final) *h_final = h_prev;
    if (c_final) *c_final = c_prev;
    return h;
}

ForwardCache SequenceClassifier::run_forward(const Matrix2D& x,
                                             const std::vector<double>* mask) const {
    if (x.cols() != spec_.input_width)
        throw ValidationError("classifier input width mismatch: got " +
                              std::to_string(x.cols()) + ", expected " +
                              std::to_string(spec_.input_width));
    const std::size_t T = x.rows();
    const std::size_t n = spec_.lstm_size;
    const std::size_t in = spec_.lstm_input_width();

    ForwardCache cache;
    cache.x = x;
    if (params_.embed_w) {
        cache.embedded = Matrix2D(T, in);
        for (std::size_t t = 0; t < T; ++t) {
            double* e = cache.embedded.row(t);
            for (std::size_t k = 0; k < in; ++k) e[k] = (*params_.embed_b)[k];
            add_matvec(*params_.embed_w, x.row(t), e);
        }
    }
    const Matrix2D& xin = params_.embed_w ? cache.embedded : cache.x;

    for (auto& g : cache.gate) g = Matrix2D(T, n);
    cache.c = Matrix2D(T, n);
    cache.tanh_c = Matrix2D(T, n);
    cache.h = Matrix2D(T, n);

    std::vector<double> h_prev(n, 0.0), c_prev(n, 0.0), a(n);
    const auto& lp = params_.lstm;
    for (std::size_t t = 0; t < T; ++t) {
        for (int g = 0; g < 4; ++g) {
            a = lp.b[g];
            add_matvec(lp.w[g], xin.row(t), a.data());
            add_matvec(lp.u[g], h_prev.data(), a.data());
            double* out = cache.gate[g].row(t);
            switch (g) {
                case kInput:
                    for (std::size_t k = 0; k < n; ++k)
                        out[k] = sigmoid(a[k] + lp.p_input[k] * c_prev[k]);
                    break;
                case kForget:
                    for (std::size_t k = 0; k < n; ++k)
                        out[k] = sigmoid(a[k] + lp.p_forget[k] * c_prev[k]);
                    break;
                case kCell:
                    for (std::size_t k = 0; k < n; ++k) out[k] = std::tanh(a[k]);
                    break;
                case kOutput:
                    for (std::size_t k = 0; k < n; ++k) out[k] = a[k]; // finish below
                    break;
            }
        }
        double* c_row = cache.c.row(t);
        for (std::size_t k = 0; k < n; ++k)
            c_row[k] = cache.gate[kForget](t, k) * c_prev[k] +
                       cache.gate[kInput](t, k) * cache.gate[kCell](t, k);
        double* o_row = cache.gate[kOutput].row(t);
        for (std::size_t k = 0; k < n; ++k)
            o_row[k] = sigmoid(o_row[k] + lp.p_output[k] * c_row[k]);
        for (std::size_t k = 0; k < n; ++k) {
            cache.tanh_c(t, k) = std::tanh(c_row[k]);
            cache.h(t, k) = o_row[k] * cache.tanh_c(t, k);
        }
        h_prev.assign(cache.h.row(t), cache.h.row(t) + n);
        c_prev.assign(c_row, c_row + n);
    }

    // FC over the last hidden state; the window verdict is sequence-level
    cache.fc_hidden.assign(params_.fc_b.begin(), params_.fc_b.end());
    add_matvec(params_.fc_w, h_prev.data(), cache.fc_hidden.data());
    for (auto& v : cache.fc_hidden) v = std::tanh(v);

    if (mask) {
        if (mask->size() != spec_.fc_size)
            throw ValidationError("dropout mask size mismatch");
        cache.dropout_mask = *mask;
    } else {
        cache.dropout_mask.assign(spec_.fc_size, 1.0);
    }
    cache.fc_dropped.resize(spec_.fc_size);
    for (std::size_t k = 0; k < spec_.fc_size; ++k)
        cache.fc_dropped[k] = cache.fc_hidden[k] * cache.dropout_mask[k];

    cache.logits.assign(params_.out_b.begin(), params_.out_b.end());
    add_matvec(params_.out_w, cache.fc_dropped.data(), cache.logits.data());
    cache.probs = softmax(cache.logits);
    return cache;
}

std::pair<std::vector<double>, ForwardCache>
SequenceClassifier::forward(const Matrix2D& x, Mode mode, Rng& rng) const {
    if (mode == Mode::eval) {
        ForwardCache cache = run_forward(x, nullptr);
        return {cache.probs, std::move(cache)};
    }
    // inverted dropout: kept units scaled by 1/keep so eval needs no scaling
    std::vector<double> mask(spec_.fc_size);
    for (auto& m : mask)
        m = rng.uniform() < spec_.dropout_keep ? 1.0 / spec_.dropout_keep : 0.0;
    ForwardCache cache = run_forward(x, &mask);
    return {cache.probs, std::move(cache)};
}

std::vector<double> SequenceClassifier::predict(const Matrix2D& x) const {
    return run_forward(x, nullptr).probs;
}

double SequenceClassifier::loss_with_mask(const Matrix2D& x, int label,
                                          const std::vector<double>* mask) const {
    return cross_entropy(run_forward(x, mask).probs, label);
}

ParamSet SequenceClassifier::backward(const ForwardCache& cache, int label) const {
    const std::size_t T = cache.h.rows();
    const std::size_t n = spec_.lstm_size;
    ParamSet g = ParamSet::zeros(spec_);
    const auto& lp = params_.lstm;
    const Matrix2D& xin = params_.embed_w ? cache.embedded : cache.x;

    // softmax + cross-entropy collapses to probs - one_hot(label)
    std::vector<double> dlogits = cache.probs;
    dlogits[static_cast<std::size_t>(label)] -= 1.0;

    add_outer(g.out_w, dlogits.data(), cache.fc_dropped.data());
    for (std::size_t k = 0; k < dlogits.size(); ++k) g.out_b[k] += dlogits[k];

    std::vector<double> d_dropped(spec_.fc_size, 0.0);
    add_matvec_transposed(params_.out_w, dlogits.data(), d_dropped.data());

    std::vector<double> da_fc(spec_.fc_size);
    for (std::size_t k = 0; k < spec_.fc_size; ++k) {
        double du = d_dropped[k] * cache.dropout_mask[k];
        da_fc[k] = du * (1.0 - cache.fc_hidden[k] * cache.fc_hidden[k]);
    }
    const double* h_last = cache.h.row(T - 1);
    add_outer(g.fc_w, da_fc.data(), h_last);
    for (std::size_t k = 0; k < spec_.fc_size; ++k) g.fc_b[k] += da_fc[k];

    std::vector<double> dh(n, 0.0), dc(n, 0.0);
    add_matvec_transposed(params_.fc_w, da_fc.data(), dh.data());

    std::vector<double> da_i(n), da_f(n), da_g(n), da_o(n), dh_prev(n), dxin;
    if (params_.embed_w) dxin.resize(spec_.lstm_input_width());
    std::vector<double> zero(n, 0.0);

    for (std::size_t t = T; t-- > 0;) {
        const double* i_t = cache.gate[kInput].row(t);
        const double* f_t = cache.gate[kForget].row(t);
        const double* g_t = cache.gate[kCell].row(t);
        const double* o_t = cache.gate[kOutput].row(t);
        const double* tc = cache.tanh_c.row(t);
        const double* c_t = cache.c.row(t);
        const double* c_prev = t > 0 ? cache.c.row(t - 1) : zero.data();
        const double* h_prev = t > 0 ? cache.h.row(t - 1) : zero.data();

        for (std::size_t k = 0; k < n; ++k) {
            double do_k = dh[k] * tc[k];
            da_o[k] = do_k * o_t[k] * (1.0 - o_t[k]);
            // a_o reads c_t through the output peephole
            dc[k] += dh[k] * o_t[k] * (1.0 - tc[k] * tc[k]) + da_o[k] * lp.p_output[k];
            da_i[k] = dc[k] * g_t[k] * i_t[k] * (1.0 - i_t[k]);
            da_f[k] = dc[k] * c_prev[k] * f_t[k] * (1.0 - f_t[k]);
            da_g[k] = dc[k] * i_t[k] * (1.0 - g_t[k] * g_t[k]);

            g.lstm.p_output[k] += da_o[k] * c_t[k];
            g.lstm.p_input[k] += da_i[k] * c_prev[k];
            g.lstm.p_forget[k] += da_f[k] * c_prev[k];
        }

        const std::array<const std::vector<double>*, 4> das = {&da_i, &da_f, &da_g,
                                                               &da_o};
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        if (params_.embed_w) std::fill(dxin.begin(), dxin.end(), 0.0);
        for (int gate = 0; gate < 4; ++gate) {
            const auto& da = *das[gate];
            add_outer(g.lstm.w[gate], da.data(), xin.row(t));
            add_outer(g.lstm.u[gate], da.data(), h_prev);
            for (std::size_t k = 0; k < n; ++k) g.lstm.b[gate][k] += da[k];
            add_matvec_transposed(lp.u[gate], da.data(), dh_prev.data());
            if (params_.embed_w)
                add_matvec_transposed(lp.w[gate], da.data(), dxin.data());
        }
        if (params_.embed_w) {
            add_outer(*g.embed_w, dxin.data(), cache.x.row(t));
            for (std::size_t k = 0; k < dxin.size(); ++k) (*g.embed_b)[k] += dxin[k];
        }

        // carry into t-1
        for (std::size_t k = 0; k < n; ++k)
            dc[k] = dc[k] * f_t[k] + da_i[k] * lp.p_input[k] + da_f[k] * lp.p_forget[k];
        dh = dh_prev;
    }
    return g;
}

AdamOptimizer::AdamOptimizer(const ModelSpec& spec, double learning_rate, double beta1,
                             double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(ParamSet::zeros(spec)), v_(ParamSet::zeros(spec)) {}

void AdamOptimizer::step(ParamSet& params, const ParamSet& grads) {
    auto p = params.tensors();
    auto g = const_cast<ParamSet&>(grads).tensors();
    auto m = m_.tensors();
    auto v = v_.tensors();
    if (p.size() != g.size())
        throw ValidationError("optimizer: parameter/gradient structure mismatch");

    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = 0; k < g[i].size; ++k)
            if (!std::isfinite(g[i].data[k]))
                throw NumericError("non-finite gradient in " + g[i].name);

    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].size != g[i].size)
            throw ValidationError("optimizer: tensor shape mismatch: " + p[i].name);
        for (std::size_t k = 0; k < p[i].size; ++k) {
            double grad = g[i].data[k];
            double& mk = m[i].data[k];
            double& vk = v[i].data[k];
            mk = beta1_ * mk + (1.0 - beta1_) * grad;
            vk = beta2_ * vk + (1.0 - beta2_) * grad * grad;
            double m_hat = mk / bc1;
            double v_hat = vk / bc2;
            p[i].data[k] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
        }
    }
}

double grad_check(const ModelSpec& spec, std::uint64_t seed,
                  const GradCheckOptions& options) {
    SequenceClassifier model(spec, derive_seed(seed, 0));
    Rng data_rng(derive_seed(seed, 1));
    Matrix2D x(options.sequence_length, spec.input_width);
    for (double& v : x.values()) v = data_rng.uniform(-1.0, 1.0);
    int label = static_cast<int>(data_rng.index(2));

    Rng mask_rng(derive_seed(seed, 2));
    auto [probs, cache] = model.forward(x, Mode::train, mask_rng);
    (void)probs;
    ParamSet grads = model.backward(cache, label);
    if (options.corrupt_forget_gate)
        for (double& v : grads.lstm.w[kForget].values()) v *= 2.0;

    auto p = model.params().tensors();
    auto g = grads.tensors();
    const double eps = options.epsilon;
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t k = 0; k < p[i].size; ++k) {
            double orig = p[i].data[k];
            p[i].data[k] = orig + eps;
            double lp = model.loss_with_mask(x, label, &cache.dropout_mask);
            p[i].data[k] = orig - eps;
            double lm = model.loss_with_mask(x, label, &cache.dropout_mask);
            p[i].data[k] = orig;
            double numeric = (lp - lm) / (2.0 * eps);
            double analytic = g[i].data[k];
            double rel = std::fabs(analytic - numeric) /
                         std::max(std::fabs(analytic) + std::fabs(numeric), 1e-4);
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

namespace {

void write_values(std::ostream& out, const double* data, std::size_t size) {
    char buf[40];
    for (std::size_t k = 0; k < size; ++k) {
        std::snprintf(buf, sizeof(buf), "%a", data[k]);
        out << buf << ((k + 1) % 8 == 0 || k + 1 == size ? '\n' : ' ');
    }
}

double read_hex_double(std::istream& in, const std::string& what) {
    std::string tok;
    if (!(in >> tok)) throw ParseError("checkpoint: unexpected end of file in " + what);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError("checkpoint: bad value '" + tok + "' in " + what);
    return v;
}

} // namespace

void save_checkpoint(std::ostream& out, const SequenceClassifier& model) {
    const ModelSpec& s = model.spec();
    out << "screp-checkpoint 1\n";
    out << "input_width " << s.input_width << '\n';
    out << "embed_size " << (s.embed_size ? std::to_string(*s.embed_size) : "none")
        << '\n';
    out << "lstm_size " << s.lstm_size << '\n';
    out << "fc_size " << s.fc_size << '\n';
    out << "output_size " << s.output_size << '\n';
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", s.dropout_keep);
    out << "dropout_keep " << buf << '\n';
    auto ts = const_cast<SequenceClassifier&>(model).params().tensors();
    for (const auto& t : ts) {
        out << "tensor " << t.name << ' ' << t.size << '\n';
        write_values(out, t.data, t.size);
    }
    out << "end\n";
}

SequenceClassifier load_checkpoint(std::istream& in) {
    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != "screp-checkpoint")
        throw ParseError("checkpoint: bad magic");
    if (version != 1)
        throw ParseError("checkpoint: unsupported version " + std::to_string(version));

    ModelSpec spec;
    auto expect_key = [&](const char* key) {
        if (!(in >> word) || word != key)
            throw ParseError(std::string("checkpoint: expected '") + key + "'");
    };
    expect_key("input_width");
    in >> spec.input_width;
    expect_key("embed_size");
    in >> word;
    if (word != "none") spec.embed_size = std::stoul(word);
    expect_key("lstm_size");
    in >> spec.lstm_size;
    expect_key("fc_size");
    in >> spec.fc_size;
    expect_key("output_size");
    in >> spec.output_size;
    expect_key("dropout_keep");
    spec.dropout_keep = read_hex_double(in, "dropout_keep");
    if (!in) throw ParseError("checkpoint: truncated header");

    ParamSet params = ParamSet::zeros(spec);
    auto ts = params.tensors();
    for (auto& t : ts) {
        std::string name;
        std::size_t size = 0;
        if (!(in >> word >> name >> size) || word != "tensor")
            throw ParseError("checkpoint: expected tensor record");
        if (name != t.name)
            throw ParseError("checkpoint: expected tensor '" + t.name + "', got '" +
                             name + "'");
        if (size != t.size)
            throw ValidationError("checkpoint: tensor '" + name + "' has size " +
                                  std::to_string(size) + ", expected " +
                                  std::to_string(t.size));
        for (std::size_t k = 0; k < t.size; ++k)
            t.data[k] = read_hex_double(in, name);
    }
    if (!(in >> word) || word != "end")
        throw ParseError("checkpoint: missing end marker");
    return SequenceClassifier(spec, std::move(params));
}

void save_checkpoint_file(const std::string& path, const SequenceClassifier& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    save_checkpoint(out, model);
}

SequenceClassifier load_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    return load_checkpoint(in);
}

} // namespace screp::nn
