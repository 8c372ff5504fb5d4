#include <gtest/gtest.h>

#include "hgsts/io.hpp"

using namespace hgsts;

TEST(Schema, LineAndConsume) {
    EXPECT_EQ(schema_line("sts"), "# schema sts v1\n");
    EXPECT_TRUE(detail::consume_schema_line("# schema sts v1", "sts"));
    EXPECT_FALSE(detail::consume_schema_line("0 1 2", "sts"));
    EXPECT_THROW(detail::consume_schema_line("# schema sts v2", "sts"), InvalidArgument);
    EXPECT_THROW(detail::consume_schema_line("# schema qsys v1", "sts"), InvalidArgument);
}

TEST(StsFormat, RoundTrip) {
    const auto s = from_digits(9, "012,034,135,678");
    const auto text = write_sts(s);
    EXPECT_EQ(text, "sts v1 n=9\n0 1 2\n0 3 4\n1 3 5\n6 7 8\n# schema sts v1\n");
    EXPECT_EQ(read_sts(text), s);
    EXPECT_EQ(read_sts("sts v1 n=4\r\n0 1 2\r\n\n# schema sts v1\r\n"), from_digits(4, "012"));
    EXPECT_EQ(read_sts(write_sts(TripleSystem(7))), TripleSystem(7));
}

TEST(StsFormat, RejectsMalformed) {
    EXPECT_THROW(read_sts(""), InvalidArgument);
    EXPECT_THROW(read_sts("sts v2 n=4\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sys v1 n=4\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=x\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4 extra\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4\n0 1 2\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4\n0 1 4\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4\n0 1 1\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4\n0 1 2\n2 1 0\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4\n0 1\n# schema sts v1\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4\n# schema sts v1\n0 1 2\n"), InvalidArgument);
    EXPECT_THROW(read_sts("sts v1 n=4\n0 1 2\n# schema sts v2\n"), InvalidArgument);
}

TEST(QsysFormat, RoundTrip) {
    const auto s = affine_plane_3();
    const auto text = write_qsys(s);
    EXPECT_EQ(text.rfind("qsys n=9 q=3 r=2\n", 0), 0u);
    EXPECT_NE(text.find("0,1,2\n"), std::string::npos);
    auto back = read_qsys(text);
    auto want = s;
    want.normalize();
    EXPECT_EQ(back.blocks, want.blocks);
    EXPECT_EQ(back.n, 9);
    EXPECT_EQ(back.q, 3);
    EXPECT_EQ(back.r, 2);
}

TEST(QsysFormat, RejectsMalformed) {
    EXPECT_THROW(read_qsys(""), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3\n# schema qsys v1\n"), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3 r=2\n0,1,2\n"), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3 r=2\n0,1,x\n# schema qsys v1\n"), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3 r=2\n0,1\n# schema qsys v1\n"), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3 r=2\n0,1,7\n# schema qsys v1\n"), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3 r=2\n0,1,2\n0,1,2\n# schema qsys v1\n"), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3 r=3\n# schema qsys v1\n"), InvalidArgument);
    EXPECT_THROW(read_qsys("qsys n=7 q=3 r=2\n# schema qsys v1\n0,1,2\n"), InvalidArgument);
}

TEST(CatalogFormat, RoundTripAndTrailer) {
    const auto cat = enumerate_erdos(7);
    const auto text = write_catalog(cat);
    EXPECT_NE(text.find("# schema erdos-catalog v1\n"), std::string::npos);
    const auto back = read_catalog(text);
    EXPECT_EQ(back.serialize(), cat.serialize());
    EXPECT_THROW(read_catalog(cat.serialize()), InvalidArgument);
    EXPECT_THROW(read_catalog(text + "junk\n"), InvalidArgument);
    EXPECT_THROW(read_catalog(cat.serialize() + "# schema erdos-catalog v9\n"), InvalidArgument);
}
