from __future__ import absolute_import

import numpy as np
import pytest

from sdlab.errors import ConfigurationError, IllegalArgumentError
from sdlab.tensor import AdamW, LinearDecay, Tensor, adamw_step, clip_grad_norm


def test_zero_gradient_leaves_params_unchanged():
    p = np.array([1.0, -2.0, 3.0])
    state = adamw_step([p], [np.zeros(3)], {}, lr=0.1)
    np.testing.assert_array_equal(p, [1.0, -2.0, 3.0])
    assert state['step'] == 1


def test_first_step_moves_by_lr_times_sign():
    # bias correction makes the first update lr * g / (|g| + eps)
    p = np.array([0.5, 0.5])
    adamw_step([p], [np.array([4.0, -0.25])], {}, lr=0.01, eps=0.0)
    np.testing.assert_allclose(p, [0.49, 0.51], atol=1e-12)


def test_decoupled_weight_decay():
    p = np.array([2.0])
    adamw_step([p], [np.zeros(1)], {}, lr=0.01, weight_decay=0.1)
    np.testing.assert_allclose(p, [2.0 * (1 - 0.001)])


def test_none_grad_counts_as_zero():
    p, q = np.array([1.0]), np.array([1.0])
    adamw_step([p, q], [np.array([1.0]), None], {}, lr=0.1)
    assert p[0] < 1.0
    assert q[0] == 1.0


def test_state_slot_mismatch():
    state = adamw_step([np.zeros(2)], [np.ones(2)], {}, lr=0.1)
    with pytest.raises(IllegalArgumentError):
        adamw_step([np.zeros(2), np.zeros(2)], [None, None], state, lr=0.1)


def test_clip_grad_norm():
    a = Tensor(np.zeros(2), requires_grad=True)
    b = Tensor(np.zeros(1), requires_grad=True)
    a.grad = np.array([3.0, 0.0])
    b.grad = np.array([4.0])
    assert clip_grad_norm([a, b], 1.0) == pytest.approx(5.0)
    np.testing.assert_allclose(a.grad, [0.6, 0.0], rtol=1e-9)
    np.testing.assert_allclose(b.grad, [0.8], rtol=1e-9)


def test_clip_skips_missing_grads():
    a = Tensor(np.zeros(2), requires_grad=True)
    b = Tensor(np.zeros(2), requires_grad=True)
    a.grad = np.array([0.3, 0.4])
    assert clip_grad_norm([a, b], None) == pytest.approx(0.5)
    assert b.grad is None


def test_linear_decay():
    decay = LinearDecay(1.0, 10, final_fraction=0.2)
    assert decay.lr_at(0) == 1.0
    assert decay.lr_at(5) == pytest.approx(0.5)
    assert decay.lr_at(9) == pytest.approx(0.2)
    with pytest.raises(ConfigurationError):
        LinearDecay(1.0, 0)
    with pytest.raises(ConfigurationError):
        LinearDecay(1.0, 10, final_fraction=1.5)


def test_adamw_unrecognized_config():
    with pytest.raises(ConfigurationError):
        AdamW([Tensor(np.zeros(1), requires_grad=True)], momentum=0.9)


def test_adamw_needs_params():
    with pytest.raises(IllegalArgumentError):
        AdamW([])


def test_adamw_minimizes_quadratic():
    x = Tensor(np.array([3.0, -2.0]), requires_grad=True)
    opt = AdamW([x], lr=0.1)
    for _ in range(300):
        opt.zero_grad()
        (x * x).sum().backward()
        opt.step()
    assert np.abs(x.data).max() < 0.05


def test_adamw_schedule_and_grad_norm():
    x = Tensor(np.array([1.0]), requires_grad=True)
    opt = AdamW([x], lr=0.1, total_steps=4)
    lrs = []
    for _ in range(4):
        opt.zero_grad()
        (x * 3.0).sum().backward()
        lrs.append(opt.step())
    assert lrs == pytest.approx([0.1, 0.075, 0.05, 0.025])
    assert opt.last_grad_norm == pytest.approx(3.0)
    assert opt.steps_taken == 4


def test_adamw_state_dict_resumes_identically():
    def run(opt, x, n):
        for _ in range(n):
            opt.zero_grad()
            ((x - 1.0) * (x - 1.0)).sum().backward()
            opt.step()

    x1 = Tensor(np.array([0.0, 2.0]), requires_grad=True)
    opt1 = AdamW([x1], lr=0.05)
    run(opt1, x1, 6)

    x2 = Tensor(np.array([0.0, 2.0]), requires_grad=True)
    opt2 = AdamW([x2], lr=0.05)
    run(opt2, x2, 3)
    saved = opt2.state_dict()
    x3 = Tensor(x2.data.copy(), requires_grad=True)
    opt3 = AdamW([x3], lr=0.05)
    opt3.load_state_dict(saved)
    run(opt3, x3, 3)
    np.testing.assert_array_equal(x1.data, x3.data)


def test_adamw_empty_state_dict():
    opt = AdamW([Tensor(np.zeros(2), requires_grad=True)])
    assert opt.state_dict() == {'step': 0, 'm': [], 'v': []}
    opt.load_state_dict({'step': 0, 'm': [], 'v': []})
    assert opt.steps_taken == 0
