"""
Popular, dominant and robust popular matchings under strict preferences.
"""
