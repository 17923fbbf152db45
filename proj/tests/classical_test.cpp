#include "eacomm/classical.hpp"

#include <gtest/gtest.h>

using namespace eacomm;

TEST(ClassicalBound, SidesAgreeTaskS) {
    const GameFunctional f = functional_S();
    for (int d : {2, 4}) {
        const BoundResult enc = max_classical_value(f, d, EnumerationSide::Encoders);
        const BoundResult dec = max_classical_value(f, d, EnumerationSide::Decoders);
        EXPECT_NEAR(enc.value, dec.value, 1e-12) << "d=" << d;
        EXPECT_EQ(enc.enumeratedSide, "encoders");
        EXPECT_EQ(dec.enumeratedSide, "decoders");
    }
}

TEST(ClassicalBound, SidesAgreeTaskT) {
    const GameFunctional f = functional_RAC(3, 2);
    for (int d : {2, 3, 4, 5}) {
        const BoundResult enc = max_classical_value(f, d, EnumerationSide::Encoders);
        const BoundResult dec = max_classical_value(f, d, EnumerationSide::Decoders);
        EXPECT_NEAR(enc.value, dec.value, 1e-12) << "d=" << d;
    }
}

TEST(ClassicalBound, MonotoneInAlphabetSize) {
    const GameFunctional f = functional_RAC(3, 2);
    double prev = -1e300;
    for (int d = 1; d <= 6; ++d) {
        const double v = max_classical_value(f, d).value;
        EXPECT_GE(v, prev - 1e-12) << "d=" << d;
        prev = v;
    }
}

TEST(ClassicalBound, SaturatesOnceMessageResolvesInput) {
    const GameFunctional f = functional_RAC(3, 2);
    double cap = 0.0;
    for (int x = 0; x < f.scenario.nX; ++x)
        for (int y = 0; y < f.scenario.nY; ++y) {
            double best = f.coeff(x, y, 0);
            for (int b = 1; b < f.scenario.nB; ++b) best = std::max(best, f.coeff(x, y, b));
            cap += best;
        }
    cap *= f.normalization;
    EXPECT_NEAR(max_classical_value(f, 8).value, cap, 1e-12);
    EXPECT_NEAR(cap, 1.0, 1e-12);

    const GameFunctional g = functional_S();
    EXPECT_NEAR(max_classical_value(g, 5).value, 6.0, 1e-12);
    EXPECT_NEAR(max_classical_value(g, 6).value, 6.0, 1e-12);
}

TEST(ClassicalBound, WitnessReproducesValue) {
    struct Case {
        GameFunctional f;
        int d;
    };
    const std::vector<Case> cases = {
        {functional_S(), 2},          {functional_S(), 4},
        {functional_RAC(3, 2), 2},    {functional_RAC(3, 2), 4},
        {functional_RAC(2, 4), 2},
    };
    for (const auto& c : cases) {
        const BoundResult r = max_classical_value(c.f, c.d);
        EXPECT_NEAR(verify_strategy(c.f, c.d, r.witness), r.value, 1e-12)
            << c.f.label << " d=" << c.d;
        EXPECT_EQ(static_cast<int>(r.witness.encoder.size()), c.f.scenario.nX);
        EXPECT_EQ(static_cast<int>(r.witness.decoders.size()), c.f.scenario.nY);
    }
}

TEST(ClassicalBound, HandBuiltPartitionForSWithTwoBits) {
    const GameFunctional f = functional_S();
    ClassicalStrategy strat;
    strat.encoder = {0, 1, 1, 2, 3};
    strat.decoders.resize(6);
    for (int y = 0; y < 6; ++y) {
        strat.decoders[y].resize(4);
        for (int m = 0; m < 4; ++m) {
            double best = -1e300;
            int arg = 0;
            for (int b = 0; b < 2; ++b) {
                double acc = 0.0;
                for (int x = 0; x < 5; ++x)
                    if (strat.encoder[x] == m) acc += f.coeff(x, y, b);
                if (acc > best) {
                    best = acc;
                    arg = b;
                }
            }
            strat.decoders[y][m] = arg;
        }
    }
    EXPECT_NEAR(verify_strategy(f, 4, strat), 5.0, 1e-12);
    EXPECT_NEAR(max_classical_value(f, 4).value, 5.0, 1e-12);
}

TEST(ClassicalBound, BudgetErrorNamesBothSides) {
    const GameFunctional f = functional_RAC(2, 4);
    try {
        max_classical_value(f, 16, EnumerationSide::Auto, 1e9);
        FAIL() << "expected BudgetError";
    } catch (const BudgetError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("encoder side"), std::string::npos);
        EXPECT_NE(msg.find("decoder side"), std::string::npos);
    }
}

TEST(ClassicalBound, ForcedSideRespectsBudget) {
    const GameFunctional f = functional_RAC(2, 4);
    EXPECT_THROW(max_classical_value(f, 5, EnumerationSide::Encoders, 1e6), BudgetError);
    EXPECT_NO_THROW(max_classical_value(f, 2, EnumerationSide::Encoders, 1e6));
}

TEST(ClassicalBound, RejectsBadArguments) {
    EXPECT_THROW(max_classical_value(functional_S(), 0), ValidationError);
    ClassicalStrategy bad;
    bad.encoder = {0, 0, 0, 0, 9};
    bad.decoders.assign(6, std::vector<int>(4, 0));
    EXPECT_THROW(verify_strategy(functional_S(), 4, bad), ValidationError);
}
