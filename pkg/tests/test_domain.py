"""Value types: simplex vectors, prediction sets, datasets, measure specs."""

import numpy as np
import pytest

from credcal.domain import (
    ClassifierSet,
    LabeledDataset,
    MeasureSpec,
    PredictionSet,
    SimplexVector,
    as_probability_matrix,
    as_weight_vector,
    mix,
    mix_matrix,
    one_hot,
    one_hot_rows,
    validate_dataset,
    validate_labels,
)
from credcal.errors import (
    DimensionMismatch,
    LabelOutOfRange,
    NonPositiveParameter,
    NonSimplexRow,
    ShapeMismatch,
    ValidationError,
)


class TestSimplexVector:
    def test_valid(self):
        v = SimplexVector(np.array([0.2, 0.3, 0.5]))
        assert len(v) == 3
        assert np.asarray(v).sum() == pytest.approx(1.0, abs=1e-15)

    def test_negative_coordinate_rejected(self):
        with pytest.raises(NonSimplexRow):
            SimplexVector(np.array([0.6, 0.5, -0.1]))

    def test_bad_sum_rejected(self):
        with pytest.raises(NonSimplexRow):
            SimplexVector(np.array([0.5, 0.6]))

    def test_tiny_negative_clipped(self):
        v = SimplexVector(np.array([1.0 + 5e-10, -5e-10]))
        assert v.coords[1] == 0.0
        assert v.coords.sum() == pytest.approx(1.0, abs=1e-15)

    def test_immutable(self):
        v = SimplexVector(np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            v.coords[0] = 0.9

    def test_shape_rejected(self):
        with pytest.raises(DimensionMismatch):
            SimplexVector(np.array([[0.5, 0.5]]))
        with pytest.raises(NonSimplexRow):
            SimplexVector(np.array([np.nan, 1.0]))


class TestProbabilityMatrix:
    def test_rows_renormalized_exactly(self):
        p = as_probability_matrix([[0.3, 0.7 + 4e-10], [0.5, 0.5]])
        assert np.allclose(p.sum(axis=1), 1.0, atol=1e-15)

    def test_single_class_rejected(self):
        with pytest.raises(ShapeMismatch):
            as_probability_matrix([[1.0], [1.0]])

    def test_empty_rejected(self):
        with pytest.raises(ShapeMismatch):
            as_probability_matrix(np.empty((0, 3)))

    def test_nonfinite_rejected(self):
        with pytest.raises(NonSimplexRow):
            as_probability_matrix([[np.inf, 0.0]])

    def test_weight_vector_length_checked(self):
        with pytest.raises(DimensionMismatch):
            as_weight_vector([0.5, 0.5], size=3)
        w = as_weight_vector([0.25, 0.75], size=2)
        assert w.tolist() == [0.25, 0.75]


class TestValidateDataset:
    def test_minimal_valid(self):
        data = validate_dataset([[[0.5, 0.5]]], [1])
        assert (data.n_members, data.n_instances, data.n_classes) == (1, 1, 2)
        assert data.labels.tolist() == [0]

    def test_bad_row_sum(self):
        with pytest.raises(NonSimplexRow):
            validate_dataset([[[0.7, 0.4]]], [1])

    def test_member_shape_disagreement(self):
        a = np.full((3, 2), 0.5)
        b = np.full((4, 2), 0.5)
        with pytest.raises(ShapeMismatch):
            validate_dataset([a, b], [1, 2, 1])

    def test_input_tolerance_accepts_float_noise(self):
        row = [0.3 + 2e-7, 0.7]
        data = validate_dataset([[row]], [2])
        assert data.classifier_set.stack[0, 0].sum() == pytest.approx(1.0, abs=1e-15)

    def test_label_out_of_range(self):
        with pytest.raises(LabelOutOfRange):
            validate_dataset([[[0.5, 0.5]]], [3])
        with pytest.raises(LabelOutOfRange):
            validate_dataset([[[0.5, 0.5]]], [0])

    def test_label_count_checked(self):
        with pytest.raises(ShapeMismatch):
            validate_dataset([[[0.5, 0.5], [0.4, 0.6]]], [1])

    def test_stack_input(self):
        arr = np.full((2, 3, 2), 0.5)
        data = validate_dataset(arr, [1, 2, 1])
        assert data.n_members == 2

    def test_integral_float_labels_accepted(self):
        data = validate_dataset([[[0.5, 0.5], [0.4, 0.6]]], [1.0, 2.0])
        assert data.labels.tolist() == [0, 1]
        with pytest.raises(LabelOutOfRange):
            validate_dataset([[[0.5, 0.5]]], [1.5])


class TestOneHot:
    def test_first_class(self):
        assert np.asarray(one_hot(1, 3)).tolist() == [1.0, 0.0, 0.0]

    def test_last_class(self):
        assert np.asarray(one_hot(3, 3)).tolist() == [0.0, 0.0, 1.0]

    def test_out_of_range(self):
        with pytest.raises(LabelOutOfRange):
            one_hot(4, 3)
        with pytest.raises(LabelOutOfRange):
            one_hot(0, 3)
        with pytest.raises(NonPositiveParameter):
            one_hot(1, 0)

    def test_single_nonzero(self):
        for k in range(1, 6):
            assert np.count_nonzero(np.asarray(one_hot(k, 5))) == 1

    def test_rows_helper_is_zero_based(self):
        rows = one_hot_rows(np.array([0, 2]), 3)
        assert rows.tolist() == [[1, 0, 0], [0, 0, 1]]


class TestMix:
    def _set(self):
        a = np.array([[1.0, 0.0], [0.2, 0.8]])
        b = np.array([[0.0, 1.0], [0.6, 0.4]])
        return ClassifierSet.from_members([a, b])

    def test_vertex_returns_member(self):
        cs = self._set()
        out = mix(cs, [1.0, 0.0])
        assert np.array_equal(out.probs, cs.stack[0])

    def test_identical_members_idempotent(self):
        a = np.array([[0.3, 0.7], [0.5, 0.5]])
        cs = ClassifierSet.from_members([a, a])
        out = mix(cs, [0.5, 0.5])
        assert np.allclose(out.probs, a, atol=1e-15)

    def test_hand_mixture(self):
        cs = ClassifierSet.from_members([np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]])])
        out = mix(cs, [0.25, 0.75])
        assert np.allclose(out.probs, [[0.25, 0.75]], atol=1e-15)

    def test_affine_in_weights(self):
        rng = np.random.default_rng(3)
        stack = rng.dirichlet(np.ones(4), size=(3, 8))
        cs = ClassifierSet(stack)
        l1 = rng.dirichlet(np.ones(3))
        l2 = rng.dirichlet(np.ones(3))
        for a in (0.0, 0.25, 1.0):
            lhs = mix(cs, a * l1 + (1 - a) * l2).probs
            rhs = a * mix(cs, l1).probs + (1 - a) * mix(cs, l2).probs
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_rows_sum_to_one(self):
        cs = self._set()
        rng = np.random.default_rng(0)
        for _ in range(20):
            w = rng.dirichlet(np.ones(2))
            assert np.abs(mix(cs, w).probs.sum(axis=1) - 1.0).max() < 1e-9

    def test_weight_length_checked(self):
        with pytest.raises(DimensionMismatch):
            mix(self._set(), [1.0])

    def test_mix_matrix_is_raw(self):
        stack = np.zeros((2, 1, 2))
        stack[0, 0] = [1.0, 0.0]
        stack[1, 0] = [0.0, 1.0]
        assert mix_matrix(stack, np.array([0.5, 0.5])).tolist() == [[0.5, 0.5]]


class TestClassifierSet:
    def test_members_roundtrip(self):
        a = np.array([[0.1, 0.9], [0.5, 0.5]])
        cs = ClassifierSet.from_members([a, a[::-1]])
        assert len(cs.members) == 2
        assert isinstance(cs.members[0], PredictionSet)
        assert np.array_equal(cs.members[0].probs, cs.stack[0])

    def test_empty_rejected(self):
        with pytest.raises(ShapeMismatch):
            ClassifierSet.from_members([])

    def test_stack_validated_per_member(self):
        bad = np.full((2, 2, 2), 0.5)
        bad[1, 0] = [0.9, 0.5]
        with pytest.raises(NonSimplexRow, match="member 1"):
            ClassifierSet(bad)


class TestLabels:
    def test_one_based_to_zero_based(self):
        y = validate_labels([1, 3, 2], 3, 3)
        assert y.tolist() == [0, 2, 1]

    def test_range_enforced(self):
        with pytest.raises(LabelOutOfRange):
            validate_labels([1, 4], 2, 3)

    def test_dataset_stores_zero_based(self):
        cs = ClassifierSet(np.full((1, 2, 2), 0.5))
        data = LabeledDataset(cs, np.array([0, 1]))
        assert data.labels.tolist() == [0, 1]
        with pytest.raises(LabelOutOfRange):
            LabeledDataset(cs, np.array([1, 2]))


class TestMeasureSpec:
    def test_kinds_validated(self):
        with pytest.raises(ValidationError):
            MeasureSpec("brier")

    def test_bins_positive_integer(self):
        with pytest.raises(ValidationError):
            MeasureSpec("ece_conf", bins=0)
        with pytest.raises(ValidationError):
            MeasureSpec("ece_conf", bins=2.5)

    def test_hl_needs_three_bins(self):
        with pytest.raises(ValidationError):
            MeasureSpec("hl_cwise", bins=2)
        assert MeasureSpec("hl_cwise", bins=3).bins == 3

    def test_bandwidth_positive(self):
        with pytest.raises(NonPositiveParameter):
            MeasureSpec("skce_ul", bandwidth=0.0)

    def test_binning_defaults(self):
        assert MeasureSpec("ece_conf").effective_binning == "equal_width"
        assert MeasureSpec("hl_cwise", bins=5).effective_binning == "equal_frequency"
        assert MeasureSpec("skce_ul").effective_binning is None
        assert MeasureSpec("ece_cwise", binning="equal_frequency").effective_binning == "equal_frequency"
        with pytest.raises(ValidationError):
            MeasureSpec("ece_conf", binning="quantile")

    def test_labels(self):
        assert MeasureSpec("ece_conf", bins=10).label == "ece_conf_b10"
        assert MeasureSpec("skce_ul", bandwidth=2.0).label == "skce_ul_bw2"
        assert MeasureSpec("ece_cwise", bins=10, binning="equal_frequency").label == "ece_cwise_b10_ef"
