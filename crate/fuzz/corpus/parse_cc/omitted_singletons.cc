{ "vertices": [7], "cells": [ { "vertices": [1, 2, 3], "rank": 4 } ] }
