"""Tests for kinbound.barriers."""
