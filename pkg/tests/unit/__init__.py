# Copyright (c) 2025 takotime808