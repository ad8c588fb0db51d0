# SPDX-FileCopyrightText: 2024 Roy Wright
#
# SPDX-License-Identifier: MIT

"""Generic CLI scaffolding: config file defaults, logging options and informational options."""
