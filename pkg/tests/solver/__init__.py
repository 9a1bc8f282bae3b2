"""Tests for kinbound.solver."""
