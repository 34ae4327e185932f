# Tests for chamber basis
