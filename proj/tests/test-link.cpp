#include "ptp/link.hpp"
#include "ptp/packet.hpp"
#include "ptp/scheduler.hpp"

#include <gtest/gtest.h>

namespace ptp {
namespace {

TEST(Scheduler, SameTimeFiresInScheduleOrder)
{
  Scheduler s;
  std::vector<int> order;
  s.schedule(fromMillis(5), [&] { order.push_back(1); });
  s.schedule(fromMillis(5), [&] { order.push_back(2); });
  s.schedule(fromMillis(1), [&] { order.push_back(0); });
  s.runUntil(fromSeconds(1));
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2}));
}

TEST(Scheduler, NowBeforeLater)
{
  Scheduler s;
  std::vector<int> order;
  s.schedule(0, [&] {
    s.scheduleAfter(1, [&] { order.push_back(2); });
    s.scheduleAfter(0, [&] { order.push_back(1); });
  });
  s.runUntil(10);
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(Scheduler, PastEventRejected)
{
  Scheduler s;
  s.schedule(fromSeconds(2), [] {});
  s.runUntil(fromSeconds(2));
  EXPECT_THROW(s.schedule(fromSeconds(1), [] {}), ConfigError);
}

TEST(Scheduler, DrainsEarlyWithoutTraffic)
{
  Scheduler s;
  s.schedule(fromSeconds(3), [] {});
  s.runUntil(fromSeconds(10));
  EXPECT_EQ(s.now(), fromSeconds(3));
  EXPECT_EQ(s.executed(), 1);
  EXPECT_EQ(s.pending(), 0);
}

TEST(Link, SerializationPlusPropagation)
{
  Link link(1, 2, {1e6, fromMillis(20), 64});
  std::size_t bytes = HEADER_SIZE + DEFAULT_PAYLOAD_SIZE;
  auto arrival = link.transmit(0, bytes, fromSeconds(1));
  ASSERT_TRUE(arrival);
  // 1084 B * 8 / 1 Mbps = 8.672 ms
  EXPECT_EQ(*arrival, fromSeconds(1) + fromMillis(8.672) + fromMillis(20));
}

TEST(Link, BackToBackQueues)
{
  Link link(1, 2, {1e6, fromMillis(20), 64});
  auto a = link.transmit(0, 1000, 0);
  auto b = link.transmit(0, 1000, 0);
  EXPECT_EQ(*a, fromMillis(28));
  EXPECT_EQ(*b, fromMillis(36));
  // the other direction is independent
  EXPECT_EQ(*link.transmit(1, 1000, 0), fromMillis(28));
}

TEST(Link, TailDrop)
{
  Link link(1, 2, {1e6, 0, 1});
  EXPECT_TRUE(link.transmit(0, 1000, 0));
  EXPECT_FALSE(link.transmit(0, 1000, 0));
  EXPECT_EQ(link.counters(0).droppedPackets, 1);
  // once the first packet departs there is room again
  EXPECT_TRUE(link.transmit(0, 1000, fromMillis(8)));
}

TEST(Link, DegenerateIsInstant)
{
  Link link(1, 2, {0, 0, 4});
  EXPECT_EQ(link.transmit(0, 5000, 77), 77);
}

TEST(Link, DownDropsAndBumpsEpoch)
{
  Link link(1, 2, {1e6, 0, 4});
  link.setUp(false);
  EXPECT_EQ(link.epoch(), 1);
  EXPECT_FALSE(link.transmit(0, 100, 0));
  EXPECT_EQ(link.counters(0).downDrops, 1);
  link.setUp(true);
  EXPECT_TRUE(link.transmit(0, 100, 0));
  EXPECT_EQ(link.epoch(), 1);
}

TEST(Link, RejectsBadParams)
{
  EXPECT_THROW(Link(1, 2, {-1, 0, 4}), ConfigError);
  EXPECT_THROW(Link(1, 2, {1e6, 0, 0}), ConfigError);
}

} // namespace
} // namespace ptp
