#include <doctest.h>

#include <cmath>
#include <vector>

#include "memclf/features.hpp"
#include "memclf/rng.hpp"
#include "memclf/synth.hpp"

using namespace memclf;

namespace {

Image patch_on_black(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Image img(40, 40);
    for (int row = 10; row < 20; ++row)
        for (int col = 10; col < 20; ++col) img.set_rgb(row, col, r, g, b);
    return img;
}

}  // namespace

TEST_CASE("color_feature names the patch channel") {
    CHECK(color_feature(patch_on_black(255, 0, 0)) == ColorClass::red);
    CHECK(color_feature(patch_on_black(0, 255, 0)) == ColorClass::green);
    CHECK(color_feature(patch_on_black(0, 0, 255)) == ColorClass::blue);
}

TEST_CASE("all-dark image yields the no-color sentinel") {
    Image img(20, 20);  // all black
    CHECK(color_feature(img) == ColorClass::none);
    // Just under the floor everywhere.
    for (auto& p : img.pixels) p = 31;
    CHECK(color_feature(img) == ColorClass::none);
    for (auto& p : img.pixels) p = 33;
    CHECK(color_feature(img) != ColorClass::none);
}

TEST_CASE("brightest qualifying segment wins") {
    // Dim red patch vs brighter blue patch: blue wins on intensity.
    Image img(40, 40);
    for (int row = 2; row < 12; ++row)
        for (int col = 2; col < 12; ++col) img.set_rgb(row, col, 120, 0, 0);
    for (int row = 20; row < 30; ++row)
        for (int col = 20; col < 30; ++col) img.set_rgb(row, col, 0, 0, 230);
    CHECK(color_feature(img) == ColorClass::blue);
}

TEST_CASE("T restricts the candidate pool to the largest segments") {
    // A big dim green region and a tiny bright red dot. With T = 1 the
    // candidate pool (after the background) cannot reach the dot.
    Image img(30, 30);
    for (int row = 0; row < 30; ++row)
        for (int col = 0; col < 15; ++col) img.set_rgb(row, col, 0, 100, 0);
    img.set_rgb(0, 29, 255, 0, 0);
    CHECK(color_feature(img, 20) == ColorClass::red);
    CHECK(color_feature(img, 2) == ColorClass::green);
}

TEST_CASE("color_feature on generated color images recovers the class") {
    ColorDatasetSpec spec;
    spec.L = 60;
    spec.w = 12;
    spec.n_train = 5;
    spec.n_test = 2;
    spec.seed = 123;
    auto [train, test] = generate_color_dataset(spec);
    for (std::size_t i = 0; i < train.images.size(); ++i)
        CHECK(static_cast<int>(color_feature(train.images[i])) == train.labels[i]);
    for (std::size_t i = 0; i < test.images.size(); ++i)
        CHECK(static_cast<int>(color_feature(test.images[i])) == test.labels[i]);
}

TEST_CASE("hsv ranges honor wrapping hues") {
    HsvRange wrap{350.0, 10.0, 0.0, 1.0, 0.0, 1.0};
    CHECK(wrap.contains({355.0, 0.5, 0.5}));
    CHECK(wrap.contains({5.0, 0.5, 0.5}));
    CHECK_FALSE(wrap.contains({180.0, 0.5, 0.5}));
    HsvRange plain{70.0, 160.0, 0.25, 1.0, 0.15, 1.0};
    CHECK(plain.contains({120.0, 0.8, 0.78}));
    CHECK_FALSE(plain.contains({120.0, 0.1, 0.78}));
    CHECK_FALSE(plain.contains({60.0, 0.8, 0.78}));
}

TEST_CASE("palette colors classify as intended") {
    HsvThresholds th;
    auto hsv_of = [](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        return rgb_to_hsv(r, g, b);
    };
    CHECK(th.green.contains(hsv_of(20, 235, 20)));
    CHECK(th.brown.contains(hsv_of(140, 64, 0)));
    Hsv disc = hsv_of(230, 55, 45);
    CHECK_FALSE(th.green.contains(disc));
    CHECK_FALSE(th.brown.contains(disc));
    CHECK(th.discolored.contains(disc));
    Hsv background = hsv_of(0, 0, 0);
    CHECK_FALSE(th.green.contains(background));
    CHECK_FALSE(th.brown.contains(background));
    CHECK_FALSE(th.discolored.contains(background));  // below the value floor
}

TEST_CASE("fully green leaf measures (0, 0)") {
    SyntheticLeaf leaf = generate_synthetic_leaf(96, {30.0, 40.0}, 0.0, 0.0, 4);
    LeafFeatures lf = leaf_features(leaf.image);
    CHECK(lf.f_d == doctest::Approx(0.0));
    CHECK(lf.f_b == doctest::Approx(0.0));
    CHECK(lf.brown_count == 0);
    CHECK(lf.discolored_count == 0);
    CHECK(lf.green_count == leaf.green_count);
}

TEST_CASE("leaf features reproduce synthetic ground truth exactly") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        CAPTURE(seed);
        SyntheticLeaf leaf = generate_synthetic_leaf(128, {42.0, 56.0}, 0.25, 0.10, seed);
        LeafFeatures lf = leaf_features(leaf.image);
        CHECK(lf.green_count == leaf.green_count);
        CHECK(lf.brown_count == leaf.brown_count);
        CHECK(lf.discolored_count == leaf.discolored_count);
        CHECK(lf.f_d == doctest::Approx(leaf.f_d).epsilon(1e-12));
        CHECK(lf.f_b == doctest::Approx(leaf.f_b).epsilon(1e-12));
    }
}

TEST_CASE("balanced brown recoloring drives F_b to the clamp") {
    // brown_fraction 1 recolors as many pixels as stay green; rounding can
    // tip the raw ratio past 1, where the clamp holds it.
    SyntheticLeaf leaf = generate_synthetic_leaf(128, {42.0, 56.0}, 1.0, 0.0, 9);
    CHECK(leaf.f_b == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(leaf.f_b <= 1.0);
    LeafFeatures lf = leaf_features(leaf.image);
    CHECK(lf.f_b == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(lf.f_b <= 1.0);
    CHECK(std::abs(lf.brown_count - lf.green_count) <= 1);
}

TEST_CASE("no green pixels at all measures (1, 1)") {
    Image img(16, 16);  // black: nothing matches any range
    LeafFeatures lf = leaf_features(img);
    CHECK(lf.f_d == doctest::Approx(1.0));
    CHECK(lf.f_b == doctest::Approx(1.0));
    CHECK(lf.green_count == 0);
}

TEST_CASE("pixels outside the green hull are not counted") {
    // Green square plus a far-away brown pixel outside its hull.
    Image img(30, 30);
    for (int r = 5; r < 15; ++r)
        for (int c = 5; c < 15; ++c) img.set_rgb(r, c, 40, 200, 40);
    img.set_rgb(25, 25, 110, 70, 25);
    LeafFeatures lf = leaf_features(img);
    CHECK(lf.brown_count == 0);
    CHECK(lf.f_b == doctest::Approx(0.0));
    // Move it inside the hull: now it counts.
    Image img2 = img;
    img2.set_rgb(25, 25, 0, 0, 0);
    img2.set_rgb(10, 10, 110, 70, 25);
    LeafFeatures lf2 = leaf_features(img2);
    CHECK(lf2.brown_count == 1);
    CHECK(lf2.f_b > 0.0);
}

TEST_CASE("lesion features: identities") {
    Image crop(10, 10);
    for (auto& p : crop.pixels) p = 100;
    LesionFeatures f = lesion_features(crop, crop, 100);
    CHECK(f.sz == doctest::Approx(1.0));  // 100 nonzero pixels / median 100
    CHECK(f.rd == doctest::Approx(0.0));  // identical histograms
    CHECK(f.sat == doctest::Approx(0.0));

    Image white(10, 10);
    for (auto& p : white.pixels) p = 255;
    CHECK(lesion_features(white, crop, 100, 250).sat == doctest::Approx(1.0));
}

TEST_CASE("lesion Rd responds to histogram differences") {
    Rng rng(3);
    Image a(16, 16), b(16, 16);
    for (auto& p : a.pixels) p = static_cast<std::uint8_t>(40 + rng.next_below(40));
    for (auto& p : b.pixels) p = static_cast<std::uint8_t>(180 + rng.next_below(40));
    LesionFeatures f = lesion_features(a, b, 256);
    CHECK(f.rd > 0.5);
    CHECK(f.rd <= 1.0);
    // Perfectly uniform histogram has zero variance -> defined Rd = 0.
    Image uniform(8, 8);
    for (int i = 0; i < 64; ++i)
        uniform.pixels[static_cast<std::size_t>(i) * 3] = static_cast<std::uint8_t>(i * 4);
    CHECK(lesion_features(uniform, a, 64).rd == doctest::Approx(0.0));
}

TEST_CASE("tree similarity partitions by predicted class") {
    std::vector<FeatureVector> xs = {{{0.1}, {"f"}}, {{0.2}, {"f"}}, {{0.8}, {"f"}}, {{0.9}, {"f"}}};
    std::vector<int> ys{0, 0, 1, 1};
    DecisionTree tree = train_tree(xs, ys, 1);
    CHECK(tree_similarity(xs[0], xs[0], tree) == doctest::Approx(1.0));
    CHECK(tree_similarity(xs[0], xs[1], tree) == doctest::Approx(1.0));
    CHECK(tree_similarity(xs[0], xs[3], tree) == doctest::Approx(0.0));

    // Single-leaf tree: everything is similar.
    DecisionTree stump = train_tree(xs, {0, 0, 0, 0}, 3);
    CHECK(tree_similarity(xs[0], xs[3], stump) == doctest::Approx(1.0));
}

TEST_CASE("raw pixel extractor averages boxes and scales to [0,1]") {
    Image img(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            img.set_rgb(r, c, static_cast<std::uint8_t>(r < 2 && c < 2 ? 255 : 0), 0, 51);
    RawPixelExtractor ex(2);
    FeatureVector fv = ex.extract(img);
    REQUIRE(fv.values.size() == 2u * 2u * 3u);
    REQUIRE(fv.schema.size() == fv.values.size());
    CHECK(fv.values[0] == doctest::Approx(1.0));        // top-left box, red
    CHECK(fv.values[2] == doctest::Approx(51.0 / 255)); // top-left box, blue
    CHECK(fv.values[3] == doctest::Approx(0.0));        // top-right box, red
    CHECK(fv.schema[0] == "px_0_0_r");
}

TEST_CASE("raw pixel extractor handles non-divisible sizes") {
    Image img(5, 7);
    for (auto& p : img.pixels) p = 100;
    RawPixelExtractor ex(3);
    FeatureVector fv = ex.extract(img);
    REQUIRE(fv.values.size() == 27);
    for (double v : fv.values) CHECK(v == doctest::Approx(100.0 / 255));
}

TEST_CASE("leaf extractor emits (F_d, F_b)") {
    SyntheticLeaf leaf = generate_synthetic_leaf(96, {30.0, 40.0}, 0.2, 0.1, 11);
    LeafFeatureExtractor ex;
    FeatureVector fv = ex.extract(leaf.image);
    REQUIRE(fv.schema == std::vector<std::string>{"F_d", "F_b"});
    CHECK(fv.values[0] == doctest::Approx(leaf.f_d));
    CHECK(fv.values[1] == doctest::Approx(leaf.f_b));
}

TEST_CASE("extractor factory round trips ids and params") {
    auto raw = make_extractor({{"id", "raw_pixels"}, {"params", {{"grid", 4}}}});
    CHECK(raw->id() == "raw_pixels");
    CHECK(raw->params()["grid"] == 4);
    CHECK(raw->schema().size() == 4u * 4u * 3u);

    auto leaf = make_extractor({{"id", "leaf"}});
    CHECK(leaf->id() == "leaf");
    CHECK(leaf->schema() == std::vector<std::string>{"F_d", "F_b"});

    CHECK_THROWS_AS(make_extractor({{"id", "nope"}}), std::invalid_argument);

    HsvThresholds th;
    th.green.h_lo = 65.0;
    HsvThresholds back = thresholds_from_json(thresholds_to_json(th));
    CHECK(back.green.h_lo == doctest::Approx(65.0));
    CHECK(back.brown.v_hi == doctest::Approx(0.7));
}
