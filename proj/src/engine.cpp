namespace dictmatch {}
