#ifndef PTP_MAX_FLOW_HPP
#define PTP_MAX_FLOW_HPP

#include "ptp/scenario.hpp"

namespace ptp {

/**
 * Max-flow bound (bits/s) on Data delivered to \p consumer from every producer.
 * With \p followRoutes, only Data-direction edges implied by FIB routes and access links
 * are used; otherwise every link carries Data in both directions.
 */
double
maxFlowBps(const Scenario& scenario, NodeId consumer, bool followRoutes = true);

} // namespace ptp

#endif // PTP_MAX_FLOW_HPP
