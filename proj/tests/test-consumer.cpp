#include "ptp/consumer.hpp"

#include <gtest/gtest.h>

#include <set>

namespace ptp {
namespace {

class ConsumerTest : public ::testing::Test
{
protected:
  void
  build(ConsumerConfig cfg = {})
  {
    if (cfg.flow.name().empty()) {
      cfg.flow = FlowName(Name::parse("/p/o"));
    }
    consumer = std::make_unique<Consumer>(1, cfg, sched, [this](FaceId f, Packet p) {
      if (auto* i = std::get_if<Interest>(&p)) {
        sent.push_back({f, *i});
      }
    }, rng);
    consumer->addFace(1);
    consumer->addFace(2);
    consumer->activate();
  }

  /// Slow probing and no periodic selection, so tests drive everything by hand.
  static ConsumerConfig
  quiet()
  {
    ConsumerConfig cfg;
    cfg.probeRate = 1e-3;
    cfg.switchPeriod = fromSeconds(1e4);
    return cfg;
  }

  void
  at(double t)
  {
    sched.runUntil(fromSeconds(t));
  }

  void
  data(std::uint64_t seq, bool cache = false, std::optional<Tag> tag = std::nullopt, FaceId face = 1)
  {
    consumer->receive(face, Data{Name::parse("/p/o").appendSequence(seq), tag, cache});
    consumer->checkInvariants();
  }

  std::vector<std::uint64_t>
  sentSeqs(std::size_t from = 0) const
  {
    std::vector<std::uint64_t> r;
    for (std::size_t i = from; i < sent.size(); ++i) {
      r.push_back(sequenceOf(sent[i].second.name));
    }
    return r;
  }

  PathSnapshot
  path(std::uint32_t id) const
  {
    return consumer->paths().at(id);
  }

  Scheduler sched;
  std::mt19937_64 rng{1};
  std::vector<std::pair<FaceId, Interest>> sent;
  std::unique_ptr<Consumer> consumer;
};

TEST_F(ConsumerTest, ProbeDiscoversPathAndFillsWindow)
{
  build(quiet());
  at(0);
  ASSERT_EQ(sent.size(), 1);
  EXPECT_TRUE(sent[0].second.probe);
  EXPECT_EQ(sent[0].second.tag, Tag{});
  at(0.05);
  data(0, false, Tag({2, 3}));
  ASSERT_EQ(consumer->inUseCount(), 1);
  EXPECT_EQ(path(0).tag, Tag({2, 3}));
  EXPECT_EQ(sentSeqs(1), (std::vector<std::uint64_t>{1, 2}));
  for (std::size_t i = 1; i < sent.size(); ++i) {
    EXPECT_EQ(sent[i].first, 1);
    EXPECT_EQ(sent[i].second.tag, Tag({2, 3}));
    EXPECT_FALSE(sent[i].second.probe);
  }
}

TEST_F(ConsumerTest, DuplicateProbeTagKeepsPathTable)
{
  auto cfg = quiet();
  cfg.probeRate = 10;
  build(cfg);
  at(0);
  data(0, false, Tag({2, 3}));
  at(0.1);
  auto probe = sent.back().second;
  ASSERT_TRUE(probe.probe);
  data(sequenceOf(probe.name), false, Tag({2, 3}));
  EXPECT_EQ(consumer->paths().size(), 1);
}

TEST_F(ConsumerTest, InOrderDataGrowsWindow)
{
  build(quiet());
  at(0.05);
  data(0, false, Tag({3}));
  data(1);
  EXPECT_EQ(path(0).cwnd, 3.0);
  EXPECT_EQ(path(0).inflight, 3);
  EXPECT_EQ(consumer->counters().lossesDetected, 0);
}

TEST_F(ConsumerTest, GapBehindProducerDataIsLoss)
{
  build(quiet());
  at(0.05);
  data(0, false, Tag({3}));
  data(1);
  // send order on the path: 1 2 3 4
  ASSERT_EQ(sentSeqs(1), (std::vector<std::uint64_t>{1, 2, 3, 4}));
  std::size_t mark = sent.size();
  data(4);
  EXPECT_EQ(consumer->counters().lossesDetected, 2);
  EXPECT_EQ(path(0).phase, Phase::FastRecovery);
  EXPECT_DOUBLE_EQ(path(0).cwnd, 3.0 * 0.75);
  // the lost SEQs go out again before anything new; 2.25 admits a third Interest
  EXPECT_EQ(sentSeqs(mark), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(consumer->counters().retransmissions, 2);
}

TEST_F(ConsumerTest, CacheDataDoesNotDeclareLoss)
{
  build(quiet());
  at(0.05);
  data(0, false, Tag({3}));
  data(1);
  data(4, true);
  data(2);
  EXPECT_EQ(consumer->counters().lossesDetected, 0);
  EXPECT_EQ(consumer->counters().cacheData, 1);
}

TEST_F(ConsumerTest, CacheDataLeavesRtoAlone)
{
  build(quiet());
  at(0.05);
  data(0, false, Tag({3}));
  at(0.1);
  data(1);
  double rto = path(0).rto;
  at(0.3);
  data(2, true);
  data(3, true);
  EXPECT_EQ(path(0).rto, rto);
}

TEST_F(ConsumerTest, TimeoutResetsToSlowStart)
{
  build(quiet());
  at(0.05);
  data(0, false, Tag({3}));
  std::size_t mark = sent.size();
  at(5);
  consumer->checkInvariants();
  EXPECT_GE(consumer->counters().timeouts, 2);
  EXPECT_EQ(path(0).phase, Phase::SlowStart);
  EXPECT_EQ(path(0).cwnd, 1.0);
  auto again = sentSeqs(mark);
  ASSERT_FALSE(again.empty());
  EXPECT_EQ(again.front(), 1);
}

TEST_F(ConsumerTest, SilenceAfterCacheDataStillTimesOut)
{
  build(quiet());
  at(0.05);
  data(0, false, Tag({3}));
  data(1, true);
  data(2, true);
  auto before = consumer->counters().timeouts;
  at(10);
  EXPECT_GT(consumer->counters().timeouts, before);
}

TEST_F(ConsumerTest, NackDisablesPathAndPromotesSpare)
{
  auto cfg = quiet();
  cfg.maxPaths = 1;
  cfg.probeRate = 10;
  build(cfg);
  at(0);
  data(0, false, Tag({3}));
  at(0.1);
  data(sequenceOf(sent.back().second.name), false, Tag({4}), 2);
  ASSERT_EQ(consumer->paths().size(), 2);
  EXPECT_EQ(path(1).status, PathStatus::Unused);
  consumer->receive(1, Nack{sent[1].second.name, NackReason::PathFailure});
  consumer->checkInvariants();
  EXPECT_EQ(path(0).status, PathStatus::Disabled);
  EXPECT_EQ(path(1).status, PathStatus::InUse);
  EXPECT_EQ(consumer->inUseCount(), 1);
  EXPECT_EQ(sent.back().first, 2);
}

TEST_F(ConsumerTest, NackWithoutSpareKeepsOtherPaths)
{
  auto cfg = quiet();
  cfg.probeRate = 10;
  build(cfg);
  at(0);
  data(0, false, Tag({3}));
  at(0.1);
  data(sequenceOf(sent.back().second.name), false, Tag({4}), 2);
  ASSERT_EQ(consumer->inUseCount(), 2);
  consumer->receive(1, Nack{sent[1].second.name, NackReason::PathFailure});
  consumer->checkInvariants();
  EXPECT_EQ(consumer->inUseCount(), 1);
  // orphaned Interests of the failed path move over
  EXPECT_EQ(sent.back().first, 2);
}

TEST_F(ConsumerTest, WindowFillSplitsAcrossPaths)
{
  auto cfg = quiet();
  cfg.probeRate = 10;
  build(cfg);
  at(0);
  data(0, false, Tag({3}));
  at(0.1);
  data(sequenceOf(sent.back().second.name), false, Tag({4}), 2);
  std::map<FaceId, int> perFace;
  std::set<std::uint64_t> seqs;
  for (const auto& [face, i] : sent) {
    if (!i.probe) {
      ++perFace[face];
      seqs.insert(sequenceOf(i.name));
    }
  }
  EXPECT_EQ(perFace[1], 2);
  EXPECT_EQ(perFace[2], 2);
  EXPECT_EQ(seqs.size(), 4);
}

TEST_F(ConsumerTest, ProbeRate)
{
  ConsumerConfig cfg;
  cfg.probeRate = 10;
  build(cfg);
  at(0.95);
  auto before = consumer->counters().probesSent;
  at(1.95);
  EXPECT_EQ(consumer->counters().probesSent - before, 10);
}

TEST_F(ConsumerTest, TwoPacketModeToleratesOneReorder)
{
  auto cfg = quiet();
  cfg.twoPacketLossDetection = true;
  build(cfg);
  at(0.05);
  data(0, false, Tag({3}));
  data(1);
  data(3);
  EXPECT_EQ(consumer->counters().lossesDetected, 0);
  data(4);
  EXPECT_EQ(consumer->counters().lossesDetected, 1);
}

TEST_F(ConsumerTest, DefaultModeIsSinglePacket)
{
  build(quiet());
  EXPECT_FALSE(consumer->config().twoPacketLossDetection);
  at(0.05);
  data(0, false, Tag({3}));
  data(1);
  data(3);
  EXPECT_EQ(consumer->counters().lossesDetected, 1);
}

TEST_F(ConsumerTest, FiniteObjectCompletes)
{
  auto cfg = quiet();
  cfg.totalPackets = 3;
  build(cfg);
  at(0.05);
  data(0, false, Tag({3}));
  data(1);
  data(2);
  EXPECT_TRUE(consumer->isComplete());
  std::size_t n = sent.size();
  at(20);
  EXPECT_EQ(sent.size(), n);
}

TEST_F(ConsumerTest, RejectsBadConfig)
{
  ConsumerConfig cfg;
  EXPECT_THROW(Consumer(1, cfg, sched, [](FaceId, Packet) {}, rng), ConfigError);
  cfg.flow = FlowName(Name::parse("/a"));
  cfg.maxPaths = 0;
  EXPECT_THROW(Consumer(1, cfg, sched, [](FaceId, Packet) {}, rng), ConfigError);
}

/// Answers Interests after a delay, dropping a random share of them.
TEST(ConsumerReliability, EveryPacketArrivesOnceDespiteDrops)
{
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Scheduler sched;
    std::mt19937_64 rng(seed);
    std::mt19937_64 loss(seed * 77);
    ConsumerConfig cfg;
    cfg.flow = FlowName(Name::parse("/p/o"));
    cfg.totalPackets = 400;
    cfg.maxPaths = 2;
    cfg.switchPeriod = fromSeconds(3);
    std::unique_ptr<Consumer> c;
    std::map<std::uint64_t, int> delivered;
    std::size_t probes = 0;
    c = std::make_unique<Consumer>(1, cfg, sched, [&](FaceId f, Packet p) {
      auto* i = std::get_if<Interest>(&p);
      if (i == nullptr || loss() % 10 == 0) {
        return;
      }
      Data d{i->name};
      if (i->probe) {
        d.tag = Tag({static_cast<FaceId>(2 + probes++ % 3)});
      }
      Time delay = fromMillis(20 + static_cast<double>(loss() % 30));
      sched.scheduleAfter(delay, [&c, f, d] { c->receive(f, d); });
    }, rng);
    Consumer::Events ev;
    ev.delivered = [&](Time, std::int32_t, std::uint32_t) { ++delivered[0]; };
    c->setEvents(ev);
    c->addFace(1);
    c->activate();
    for (int t = 1; t <= 120 && !c->isComplete(); ++t) {
      sched.runUntil(fromSeconds(t));
      c->checkInvariants();
    }
    EXPECT_TRUE(c->isComplete()) << "seed " << seed;
    EXPECT_EQ(delivered[0], 400);
    for (std::uint64_t s = 0; s < 400; ++s) {
      ASSERT_TRUE(c->isReceived(s));
    }
  }
}

} // namespace
} // namespace ptp
