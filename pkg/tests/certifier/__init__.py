"""Tests for kinbound.certifier."""
