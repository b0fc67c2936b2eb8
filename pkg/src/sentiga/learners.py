"""The three classifiers over the hybrid feature space.

* Multinomial logistic regression with balanced class weights, trained
  full-batch by two-loop L-BFGS (history 10) with Armijo backtracking, so
  the objective is non-increasing across iterations.
* A feed-forward MLP (two hidden layers) trained with minibatch Adam and
  accuracy-based early stopping on a held-out validation split.
* A one-vs-rest linear SVM with plain hinge loss, trained by deterministic
  full-batch subgradient descent with a 1/(reg * t) step schedule.

All training runs in float64 and is bit-deterministic for a fixed seed.
Class ordinals follow SentimentClass (negative=0, neutral=1, positive=2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    DegenerateLabelsError,
    NonFiniteFeatureError,
    ShapeMismatchError,
    TrainingError,
)
from .evaluation import stratified_split
from .features import HybridMatrix

N_CLASSES = 3


@dataclass(frozen=True)
class ClassWeights:
    """Per-class loss multipliers; balanced weights satisfy sum(w_c * n_c) = n."""

    w: np.ndarray


def balanced_weights(class_counts: Sequence[int] | np.ndarray) -> ClassWeights:
    """w_c = n / (K * n_c): equalizes the aggregate influence of each class."""
    counts = np.asarray(class_counts, dtype=float)
    if np.any(counts <= 0):
        raise DegenerateLabelsError(f"every class needs samples, got counts {counts}")
    n = counts.sum()
    return ClassWeights(w=n / (len(counts) * counts))


@dataclass(frozen=True)
class LogRegConfig:
    C: float = 2.0
    class_weight: str | None = "balanced"
    solver: str = "lbfgs"
    max_iter: int = 2000
    tol: float = 1e-6
    seed: int = 42


@dataclass(frozen=True)
class MlpConfig:
    hidden_layer_sizes: tuple[int, ...] = (256, 64)
    activation: str = "relu"
    solver: str = "adam"
    alpha: float = 1e-4
    learning_rate_init: float = 1e-3
    max_iter: int = 60
    early_stopping: bool = True
    validation_fraction: float = 0.1
    patience: int = 10
    improvement_tol: float = 1e-4
    batch_size: int | None = None  # None -> min(200, n)
    seed: int = 42


@dataclass(frozen=True)
class LinearSvmConfig:
    regularization: float = 1.0
    epochs: int = 200
    seed: int = 42


@dataclass
class LogRegModel:
    W: np.ndarray            # (3, D)
    b: np.ndarray            # (3,)
    config: LogRegConfig
    n_iter_: int = 0
    objective_history_: list[float] = field(default_factory=list)


@dataclass
class MlpModel:
    weights: list[np.ndarray]   # [(D,H1), (H1,H2), (H2,3)]
    biases: list[np.ndarray]
    config: MlpConfig
    n_epochs_: int = 0
    best_epoch_: int = 0
    validation_scores_: list[float] = field(default_factory=list)
    loss_curve_: list[float] = field(default_factory=list)


@dataclass
class LinearSvmModel:
    W: np.ndarray            # (3, D)
    b: np.ndarray            # (3,)
    config: LinearSvmConfig


def _as_matrix(X) -> sp.csr_matrix | np.ndarray:
    if isinstance(X, HybridMatrix):
        X = X.to_csr()
    if sp.issparse(X):
        X = X.tocsr().astype(np.float64)
        if not np.all(np.isfinite(X.data)):
            raise NonFiniteFeatureError("feature matrix contains non-finite values")
        return X
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d feature matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeatureError("feature matrix contains non-finite values")
    return X


def _check_labels(X, y) -> np.ndarray:
    y = np.asarray([int(v) for v in y])
    n = X.shape[0]
    if y.shape[0] != n:
        raise ShapeMismatchError(f"{n} rows but {y.shape[0]} labels")
    if n < N_CLASSES:
        raise TrainingError(f"need at least {N_CLASSES} samples, got {n}")
    present = set(np.unique(y))
    if present != set(range(N_CLASSES)):
        raise DegenerateLabelsError(
            f"training data must contain all {N_CLASSES} classes, found {sorted(present)}"
        )
    return y


def _check_features(model_dim: int, X) -> None:
    if X.shape[1] != model_dim:
        raise ShapeMismatchError(
            f"model expects {model_dim} features, got {X.shape[1]}"
        )


def _sample_weights(y: np.ndarray, class_weight: str | None) -> np.ndarray:
    if class_weight is None:
        return np.ones(len(y))
    if class_weight != "balanced":
        raise TrainingError(f"unknown class_weight: {class_weight!r}")
    counts = np.bincount(y, minlength=N_CLASSES)
    return balanced_weights(counts).w[y]


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _one_hot(y: np.ndarray) -> np.ndarray:
    out = np.zeros((len(y), N_CLASSES))
    out[np.arange(len(y)), y] = 1.0
    return out


# --------------------------------------------------------------------------
# logistic regression
# --------------------------------------------------------------------------

def _logreg_value_grad(
    theta: np.ndarray,
    X,
    Y: np.ndarray,
    sample_w: np.ndarray,
    C: float,
) -> tuple[float, np.ndarray]:
    """Objective C * sum_i w_i * CE_i + 0.5 * ||W||_F^2 (bias unpenalized)
    and its gradient, both over the flattened (W, b) vector."""
    D = X.shape[1]
    W = theta[: N_CLASSES * D].reshape(N_CLASSES, D)
    b = theta[N_CLASSES * D :]

    scores = X @ W.T + b
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_proba = shifted - log_norm[:, None]
    ce = -(Y * log_proba).sum(axis=1)
    value = C * float(sample_w @ ce) + 0.5 * float(np.sum(W * W))

    grad_scores = C * sample_w[:, None] * (np.exp(log_proba) - Y)
    grad_W = (X.T @ grad_scores).T + W
    grad_b = grad_scores.sum(axis=0)
    return value, np.concatenate([np.asarray(grad_W).ravel(), grad_b])


def _lbfgs_minimize(value_grad, theta0, max_iter, tol, history=10):
    """Two-loop L-BFGS with Armijo backtracking.

    Stops when the gradient sup-norm drops below tol, the iteration budget
    runs out, or no step achieves sufficient decrease. Every accepted step
    decreases the objective, so the recorded path is non-increasing.
    """
    theta = np.array(theta0, dtype=float)
    value, grad = value_grad(theta)
    path = [value]
    s_list: list[np.ndarray] = []
    y_list: list[np.ndarray] = []
    rho_list: list[float] = []
    n_iter = 0

    for _ in range(max_iter):
        if np.max(np.abs(grad)) < tol:
            break

        # two-loop recursion for the quasi-Newton direction
        q = grad.copy()
        alphas = []
        for s, y, rho in zip(reversed(s_list), reversed(y_list), reversed(rho_list)):
            a = rho * (s @ q)
            alphas.append(a)
            q -= a * y
        if y_list:
            gamma = (s_list[-1] @ y_list[-1]) / (y_list[-1] @ y_list[-1])
            q *= gamma
        for s, y, rho, a in zip(s_list, y_list, rho_list, reversed(alphas)):
            beta = rho * (y @ q)
            q += (a - beta) * s
        direction = -q

        slope = grad @ direction
        if slope >= 0:  # numerical safeguard: fall back to steepest descent
            direction = -grad
            slope = -(grad @ grad)

        step = 1.0 if s_list else min(1.0, 1.0 / max(1.0, np.abs(grad).sum()))
        accepted = False
        for _backtrack in range(60):
            candidate = theta + step * direction
            cand_value, cand_grad = value_grad(candidate)
            if cand_value <= value + 1e-4 * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break

        s = candidate - theta
        y = cand_grad - grad
        sy = s @ y
        if sy > 1e-12:
            s_list.append(s)
            y_list.append(y)
            rho_list.append(1.0 / sy)
            if len(s_list) > history:
                s_list.pop(0)
                y_list.pop(0)
                rho_list.pop(0)

        theta, value, grad = candidate, cand_value, cand_grad
        path.append(value)
        n_iter += 1

    return theta, path, n_iter


def train_logreg(X, y, config: LogRegConfig = LogRegConfig()) -> LogRegModel:
    """Fit balanced multinomial logistic regression from the zero model."""
    if config.solver != "lbfgs":
        raise TrainingError(f"unsupported solver: {config.solver!r}")
    X = _as_matrix(X)
    y = _check_labels(X, y)
    sample_w = _sample_weights(y, config.class_weight)
    Y = _one_hot(y)
    D = X.shape[1]

    theta0 = np.zeros(N_CLASSES * D + N_CLASSES)
    theta, path, n_iter = _lbfgs_minimize(
        lambda t: _logreg_value_grad(t, X, Y, sample_w, config.C),
        theta0,
        max_iter=config.max_iter,
        tol=config.tol,
    )
    return LogRegModel(
        W=theta[: N_CLASSES * D].reshape(N_CLASSES, D),
        b=theta[N_CLASSES * D :],
        config=config,
        n_iter_=n_iter,
        objective_history_=path,
    )


def predict_proba_logreg(model: LogRegModel, X) -> np.ndarray:
    X = _as_matrix(X)
    _check_features(model.W.shape[1], X)
    return softmax(np.asarray(X @ model.W.T) + model.b)


def predict_logreg(model: LogRegModel, X) -> np.ndarray:
    # np.argmax resolves ties toward the lowest class ordinal
    return np.argmax(predict_proba_logreg(model, X), axis=1)


# --------------------------------------------------------------------------
# multilayer perceptron
# --------------------------------------------------------------------------

def _mlp_forward(weights, biases, X) -> np.ndarray:
    activation = X
    last = len(weights) - 1
    for i, (W, b) in enumerate(zip(weights, biases)):
        activation = np.asarray(activation @ W) + b
        if i != last:
            np.maximum(activation, 0.0, out=activation)
    return softmax(activation)


def _mlp_value_grads(weights, biases, X, Y, alpha):
    """Mean cross-entropy + (alpha / 2n) * sum ||W_l||^2, with gradients.

    Hidden activations are ReLU, the output is softmax; the penalty covers
    weights only, not biases.
    """
    n = X.shape[0]
    last = len(weights) - 1

    activations = [X]
    for i, (W, b) in enumerate(zip(weights, biases)):
        z = np.asarray(activations[-1] @ W) + b
        if i != last:
            np.maximum(z, 0.0, out=z)
        activations.append(z)
    scores = activations[-1]
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_proba = shifted - log_norm[:, None]
    proba = np.exp(log_proba)

    loss = -float((Y * log_proba).sum()) / n
    loss += (0.5 * alpha / n) * sum(float(np.sum(W * W)) for W in weights)

    w_grads = [None] * len(weights)
    b_grads = [None] * len(weights)
    delta = proba - Y
    for i in range(last, -1, -1):
        w_grads[i] = (np.asarray(activations[i].T @ delta) + alpha * weights[i]) / n
        b_grads[i] = delta.mean(axis=0)
        if i > 0:
            delta = delta @ weights[i].T
            delta[activations[i] <= 0] = 0.0
    return loss, w_grads, b_grads


class _Adam:
    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def update(self, params, grads):
        self.t += 1
        rate = (
            self.lr
            * np.sqrt(1 - self.beta2**self.t)
            / (1 - self.beta1**self.t)
        )
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            p -= rate * m / (np.sqrt(v) + self.eps)


def _validation_split(y, fraction, rng):
    """Stratified where possible, plain seeded shuffle otherwise."""
    from .errors import StratificationError

    try:
        split = stratified_split(y, fraction, rng)
        return split.train_indices, split.test_indices
    except StratificationError:
        order = rng.permutation(len(y))
        n_val = min(len(y) - 1, max(1, int(np.floor(len(y) * fraction + 0.5))))
        return np.sort(order[n_val:]), np.sort(order[:n_val])


def train_mlp(X, y, config: MlpConfig = MlpConfig()) -> MlpModel:
    """Train the feed-forward baseline with minibatch Adam.

    With early stopping on, a validation fraction is held out and training
    stops once the validation accuracy has failed to improve by more than
    improvement_tol for patience + 1 consecutive epochs; the best epoch's
    parameters are restored.
    """
    if config.activation != "relu":
        raise TrainingError(f"unsupported activation: {config.activation!r}")
    if config.solver != "adam":
        raise TrainingError(f"unsupported solver: {config.solver!r}")
    X = _as_matrix(X)
    y = _check_labels(X, y)
    if config.early_stopping and X.shape[0] < 10:
        raise TrainingError("early stopping needs at least 10 samples")

    rng = np.random.default_rng(config.seed)
    layer_units = [X.shape[1], *config.hidden_layer_sizes, N_CLASSES]
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_units[:-1], layer_units[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))

    if config.early_stopping:
        train_idx, val_idx = _validation_split(y, config.validation_fraction, rng)
        X_train, y_train = X[train_idx], y[train_idx]
        X_val, y_val = X[val_idx], y[val_idx]
    else:
        X_train, y_train = X, y
        X_val = y_val = None

    Y_train = _one_hot(y_train)
    n = X_train.shape[0]
    batch_size = config.batch_size if config.batch_size else min(200, n)
    batch_size = int(np.clip(batch_size, 1, n))

    optimizer = _Adam([*weights, *biases], config.learning_rate_init)
    best_value = -np.inf
    best_params = None
    best_epoch = 0
    no_improvement = 0
    model = MlpModel(weights=weights, biases=biases, config=config)

    for epoch in range(1, config.max_iter + 1):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, batch_size):
            batch = order[start : start + batch_size]
            loss, w_grads, b_grads = _mlp_value_grads(
                weights, biases, X_train[batch], Y_train[batch], config.alpha
            )
            optimizer.update([*weights, *biases], [*w_grads, *b_grads])
            epoch_loss += loss * len(batch)
        model.loss_curve_.append(epoch_loss / n)
        model.n_epochs_ = epoch

        if config.early_stopping:
            proba = _mlp_forward(weights, biases, X_val)
            score = float(np.mean(np.argmax(proba, axis=1) == y_val))
            model.validation_scores_.append(score)
            if score < best_value + config.improvement_tol:
                no_improvement += 1
            else:
                no_improvement = 0
            if score > best_value:
                best_value = score
                best_epoch = epoch
                best_params = (
                    [W.copy() for W in weights],
                    [b.copy() for b in biases],
                )
            if no_improvement > config.patience:
                break
        else:
            # loss-based stop: best_value tracks -loss so the same
            # improvement comparison applies
            score = -model.loss_curve_[-1]
            if score < best_value + config.improvement_tol:
                no_improvement += 1
            else:
                no_improvement = 0
            if score > best_value:
                best_value = score
                best_epoch = epoch
            if no_improvement > config.patience:
                break

    if config.early_stopping and best_params is not None:
        model.weights, model.biases = best_params
    model.best_epoch_ = best_epoch
    return model


def predict_proba_mlp(model: MlpModel, X) -> np.ndarray:
    X = _as_matrix(X)
    _check_features(model.weights[0].shape[0], X)
    return _mlp_forward(model.weights, model.biases, X)


def predict_mlp(model: MlpModel, X) -> np.ndarray:
    return np.argmax(predict_proba_mlp(model, X), axis=1)


# --------------------------------------------------------------------------
# linear SVM (one-vs-rest hinge)
# --------------------------------------------------------------------------

def _svm_value_grads(W, b, X, signs, sample_w, reg):
    """0.5 * reg * ||W||_F^2 + (1/n) sum_ic w_i * max(0, 1 - s_ic f_ic)
    and its (sub)gradient; f = X W^T + b."""
    n = X.shape[0]
    scores = np.asarray(X @ W.T) + b
    margins = 1.0 - signs * scores
    violating = margins > 0
    value = 0.5 * reg * float(np.sum(W * W))
    value += float((sample_w[:, None] * np.where(violating, margins, 0.0)).sum()) / n

    grad_scores = -(sample_w[:, None] * signs * violating) / n
    grad_W = reg * W + (X.T @ grad_scores).T
    grad_b = grad_scores.sum(axis=0)
    return value, np.asarray(grad_W), grad_b


def train_linear_svm(X, y, config: LinearSvmConfig = LinearSvmConfig()) -> LinearSvmModel:
    """Deterministic full-batch subgradient descent with step 1/(reg * t),
    sharing the balanced class weights with the other learners."""
    X = _as_matrix(X)
    y = _check_labels(X, y)
    sample_w = _sample_weights(y, "balanced")
    signs = np.full((len(y), N_CLASSES), -1.0)
    signs[np.arange(len(y)), y] = 1.0

    W = np.zeros((N_CLASSES, X.shape[1]))
    b = np.zeros(N_CLASSES)
    for t in range(1, config.epochs + 1):
        _, grad_W, grad_b = _svm_value_grads(W, b, X, signs, sample_w, config.regularization)
        step = 1.0 / (config.regularization * t)
        W -= step * grad_W
        b -= step * grad_b
    return LinearSvmModel(W=W, b=b, config=config)


def decision_scores_svm(model: LinearSvmModel, X) -> np.ndarray:
    X = _as_matrix(X)
    _check_features(model.W.shape[1], X)
    return np.asarray(X @ model.W.T) + model.b


def predict_svm(model: LinearSvmModel, X) -> np.ndarray:
    return np.argmax(decision_scores_svm(model, X), axis=1)
