"""
ssmrec command line application
"""
