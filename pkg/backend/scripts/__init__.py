"""
Maintenance scripts for oneway-cluster
"""
