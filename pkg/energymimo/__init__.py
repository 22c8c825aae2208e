"""Consumption-minimizing massive MIMO precoding and its experiment harness."""
