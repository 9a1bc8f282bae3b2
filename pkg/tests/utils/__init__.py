"""Tests for kinbound.utils."""
