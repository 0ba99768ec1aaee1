//! Differential testing campaigns.
