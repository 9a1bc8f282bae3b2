"""Tests for kinbound.special."""
