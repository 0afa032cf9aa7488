{
  "vertices": [1, 2],
  "cells": [
    { "vertices": [1, 2], "rank": 1 }
  ],
  "features": [[0.5, -1.25], [3.0, 0.0]]
}
