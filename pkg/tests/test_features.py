import numpy as np
import pytest

from fakery.features import (
    FeatureSpec,
    assemble_features,
    extract_dct,
    extract_glcm,
    extract_hist,
    extract_hog,
    extract_lbp,
    extract_raw,
    extract_wavelet,
    lbp_codes,
    to_grayscale,
)
from fakery.transforms import db2_filters

from conftest import random_record, solid_record
from oracles import (
    dct2_naive,
    dwt2_naive,
    glcm_naive,
    grayscale_naive,
    hist_naive,
    hog_naive,
    lbp_codes_naive,
)


class TestFeatureSpec:
    def test_preset_dims(self):
        assert FeatureSpec.from_tag("baseline").dim == 3312
        assert FeatureSpec.from_tag("advanced").dim == 361
        assert FeatureSpec.from_tag("mixed").dim == 3673

    def test_canonical_order(self):
        spec = FeatureSpec.from_tag("dct+raw")
        assert spec.families == ("raw", "dct")
        assert spec.tag == "raw+dct"

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            FeatureSpec.from_tag("raw+bogus")


class TestGrayscale:
    def test_white(self):
        assert (to_grayscale(solid_record(255, 255, 255)) == 255.0).all()

    def test_pure_red(self):
        gray = to_grayscale(solid_record(255, 0, 0))
        assert np.abs(gray - 76.245).max() <= 1e-12

    def test_matches_per_pixel_oracle(self, rng):
        rec = random_record(rng)
        assert np.abs(to_grayscale(rec) - grayscale_naive(rec.pixels)).max() <= 1e-12


class TestRaw:
    def test_black_and_white(self):
        assert (extract_raw(solid_record(0, 0, 0)) == 0.0).all()
        assert (extract_raw(solid_record(255, 255, 255)) == 1.0).all()

    def test_first_pixel_scaling(self, rng):
        rec = random_record(rng)
        rec.pixels[0, 0] = (51, 102, 204)
        assert extract_raw(rec)[:3].tolist() == [0.2, 0.4, 0.8]


class TestHist:
    def test_black_image(self):
        h = extract_hist(solid_record(0, 0, 0))
        for ch in range(3):
            assert h[16 * ch] == 1.0
            assert h[16 * ch + 1 : 16 * (ch + 1)].sum() == 0.0
        assert h.sum() == 3.0

    def test_uniform_red_fill(self):
        rec = solid_record(0, 0, 0)
        values = np.repeat(np.arange(256, dtype=np.uint8), 4)
        rec.pixels[:, :, 0] = values.reshape(32, 32)
        h = extract_hist(rec)
        assert np.abs(h[:16] - 1.0 / 16).max() <= 1e-15

    def test_matches_counting_oracle(self, rng):
        rec = random_record(rng)
        assert np.abs(extract_hist(rec) - hist_naive(rec.pixels)).max() <= 1e-15


class TestDctFeatures:
    def test_white_image(self):
        v = extract_dct(solid_record(255, 255, 255))
        for ch in range(3):
            block = v[64 * ch : 64 * (ch + 1)]
            assert abs(block[0] - 32.0) <= 1e-12
            assert np.abs(block[1:]).max() <= 1e-12

    def test_black_image(self):
        assert np.abs(extract_dct(solid_record(0, 0, 0))).max() == 0.0

    def test_equals_sliced_naive_dct(self, rng):
        rec = random_record(rng)
        got = extract_dct(rec)
        for ch in range(3):
            full = dct2_naive(rec.pixels[:, :, ch].astype(float) / 255.0)
            want = full[:8, :8].ravel()
            assert np.abs(got[64 * ch : 64 * (ch + 1)] - want).max() <= 1e-9


class TestHog:
    def test_constant_image_all_zero(self):
        gray = to_grayscale(solid_record(100, 150, 200))
        assert (extract_hog(gray) == 0.0).all()

    def test_vertical_step_edge(self):
        gray = np.zeros((32, 32))
        gray[:, 16:] = 255.0
        out = extract_hog(gray)
        oracle = hog_naive(gray)
        assert np.abs(out - oracle).max() <= 1e-9
        # Horizontal gradient -> orientation 90 degrees -> bin 4 only.
        blocks = out.reshape(9, 4, 9)
        nonzero_bins = {
            b for blk in range(9) for cell in range(4) for b in range(9)
            if blocks[blk, cell, b] != 0.0
        }
        assert nonzero_bins <= {4}
        # Each nonzero block is unit norm up to the Hys re-normalization bound.
        for blk in range(9):
            v = blocks[blk].ravel()
            norm = np.sqrt((v * v).sum())
            if norm > 0:
                assert norm <= np.sqrt(36) * 0.2 + 1e-9

    def test_matches_voting_oracle(self, rng):
        for _ in range(5):
            gray = to_grayscale(random_record(rng))
            assert np.abs(extract_hog(gray) - hog_naive(gray)).max() <= 1e-9

    def test_hys_bound(self, rng):
        # The final renormalization divides by a norm <= 1, so components may
        # exceed the 0.2 clip slightly; 1 is the true upper bound.
        out = extract_hog(to_grayscale(random_record(rng)))
        assert out.shape == (324,)
        assert out.min() >= 0.0
        assert out.max() <= 1.0
        # Before renormalization every component was capped at 0.2, so each
        # block's norm stays <= sqrt(36) * 0.2.
        for blk in out.reshape(9, 36):
            assert np.sqrt((blk * blk).sum()) <= np.sqrt(36) * 0.2 + 1e-9


class TestLbp:
    def test_constant_image_codes(self):
        codes = lbp_codes(np.full((32, 32), 50.0))
        assert (codes == 255).all()

    def test_bright_center(self):
        gray = np.zeros((32, 32))
        gray[5, 5] = 255.0
        assert lbp_codes(gray)[4, 4] == 0

    def test_codes_match_oracle(self, rng):
        gray = to_grayscale(random_record(rng))
        assert (lbp_codes(gray) == lbp_codes_naive(gray)).all()

    def test_constant_image_histogram(self):
        h = extract_lbp(np.full((32, 32), 50.0))
        assert h[8] == 1.0
        assert h.sum() == 1.0

    def test_checkerboard_nonuniform(self):
        # Bright checkerboard centers see only their diagonals as >=, giving
        # code 0b10101010 (8 transitions, non-uniform) -> bin 9.  Dark centers
        # see every neighbor as >=, giving code 255 -> bin 8.
        gray = np.indices((32, 32)).sum(axis=0) % 2 * 255.0
        codes = lbp_codes(gray)
        assert set(np.unique(codes)) == {0b10101010, 255}
        h = extract_lbp(gray)
        assert h[8] == 0.5
        assert h[9] == 0.5

    def test_histogram_sums_to_one(self, rng):
        h = extract_lbp(to_grayscale(random_record(rng)))
        assert abs(h.sum() - 1.0) <= 1e-12
        assert (h[10:] == 0.0).all()


class TestGlcm:
    def test_constant_image(self):
        out = extract_glcm(np.full((32, 32), 99.0))
        for a in range(4):
            assert np.allclose(out[4 * a : 4 * a + 4], [0.0, 1.0, 1.0, 1.0])

    def test_alternating_stripes(self):
        gray = np.zeros((32, 32))
        gray[:, 1::2] = 255.0
        out = extract_glcm(gray)
        contrast, homogeneity, energy, corr = out[:4]  # 0-degree angle
        assert abs(contrast - 961.0) <= 1e-12
        assert abs(homogeneity - 1.0 / 962.0) <= 1e-12
        assert abs(energy - np.sqrt(0.5)) <= 1e-12
        assert abs(corr - (-1.0)) <= 1e-12
        assert np.abs(out - glcm_naive(gray)).max() <= 1e-12

    def test_properties_on_random(self, rng):
        out = extract_glcm(to_grayscale(random_record(rng)))
        for a in range(4):
            contrast, homogeneity, energy, corr = out[4 * a : 4 * a + 4]
            assert contrast >= 0.0
            assert 0.0 < homogeneity <= 1.0
            assert 0.0 < energy <= 1.0
            assert -1.0 - 1e-12 <= corr <= 1.0 + 1e-12

    def test_matches_pair_oracle(self, rng):
        gray = to_grayscale(random_record(rng))
        assert np.abs(extract_glcm(gray) - glcm_naive(gray)).max() <= 1e-12


class TestWavelet:
    def test_constant_100(self):
        out = extract_wavelet(np.full((32, 32), 100.0))
        assert np.allclose(out, [0.0, 0.0, 0.0, 200.0, 0.0], atol=1e-12)

    def test_black(self):
        assert (extract_wavelet(np.zeros((32, 32))) == 0.0).all()

    def test_matches_oracle_subbands(self, rng):
        gray = to_grayscale(random_record(rng))
        low, high = db2_filters()
        a, lh, hl, hh = dwt2_naive(gray, low, high)
        want = np.array(
            [(lh**2).mean(), (hl**2).mean(), (hh**2).mean(), a.mean(), a.std()]
        )
        assert np.abs(extract_wavelet(gray) - want).max() <= 1e-9


class TestAssemble:
    def test_dimensions(self, rng):
        rec = random_record(rng)
        assert assemble_features(rec, FeatureSpec.from_tag("mixed")).shape == (3673,)
        assert assemble_features(rec, FeatureSpec.from_tag("baseline")).shape == (3312,)
        assert assemble_features(rec, FeatureSpec.from_tag("advanced")).shape == (361,)

    def test_concatenation_order(self, rng):
        rec = random_record(rng)
        mixed = assemble_features(rec, FeatureSpec.from_tag("mixed"))
        assert (mixed[:3072] == extract_raw(rec)).all()
        assert (mixed[3072:3120] == extract_hist(rec)).all()

    def test_purity(self, rng):
        rec = random_record(rng)
        spec = FeatureSpec.from_tag("mixed")
        a = assemble_features(rec, spec)
        b = assemble_features(rec, spec)
        assert (a == b).all()

    def test_finite_under_fuzzing(self, rng):
        spec = FeatureSpec.from_tag("mixed")
        for _ in range(1000):
            v = assemble_features(random_record(rng), spec)
            assert np.isfinite(v).all()
