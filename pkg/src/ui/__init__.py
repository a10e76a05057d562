# User interface package 