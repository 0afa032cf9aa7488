{
  "vertices": [
    0,
    1,
    2,
    3,
    4,
    5,
    6,
    7,
    8
  ],
  "cells": [
    {
      "vertices": [
        0
      ],
      "rank": 0
    },
    {
      "vertices": [
        1
      ],
      "rank": 0
    },
    {
      "vertices": [
        2
      ],
      "rank": 0
    },
    {
      "vertices": [
        3
      ],
      "rank": 0
    },
    {
      "vertices": [
        4
      ],
      "rank": 0
    },
    {
      "vertices": [
        5
      ],
      "rank": 0
    },
    {
      "vertices": [
        6
      ],
      "rank": 0
    },
    {
      "vertices": [
        7
      ],
      "rank": 0
    },
    {
      "vertices": [
        8
      ],
      "rank": 0
    },
    {
      "vertices": [
        0,
        1
      ],
      "rank": 1
    },
    {
      "vertices": [
        0,
        2
      ],
      "rank": 1
    },
    {
      "vertices": [
        0,
        3
      ],
      "rank": 1
    },
    {
      "vertices": [
        0,
        6
      ],
      "rank": 1
    },
    {
      "vertices": [
        1,
        2
      ],
      "rank": 1
    },
    {
      "vertices": [
        1,
        4
      ],
      "rank": 1
    },
    {
      "vertices": [
        1,
        7
      ],
      "rank": 1
    },
    {
      "vertices": [
        2,
        5
      ],
      "rank": 1
    },
    {
      "vertices": [
        2,
        8
      ],
      "rank": 1
    },
    {
      "vertices": [
        3,
        4
      ],
      "rank": 1
    },
    {
      "vertices": [
        3,
        5
      ],
      "rank": 1
    },
    {
      "vertices": [
        3,
        6
      ],
      "rank": 1
    },
    {
      "vertices": [
        4,
        5
      ],
      "rank": 1
    },
    {
      "vertices": [
        4,
        7
      ],
      "rank": 1
    },
    {
      "vertices": [
        5,
        8
      ],
      "rank": 1
    },
    {
      "vertices": [
        6,
        7
      ],
      "rank": 1
    },
    {
      "vertices": [
        6,
        8
      ],
      "rank": 1
    },
    {
      "vertices": [
        7,
        8
      ],
      "rank": 1
    },
    {
      "vertices": [
        0,
        1,
        3,
        4
      ],
      "rank": 2
    },
    {
      "vertices": [
        0,
        1,
        6,
        7
      ],
      "rank": 2
    },
    {
      "vertices": [
        0,
        2,
        3,
        5
      ],
      "rank": 2
    },
    {
      "vertices": [
        0,
        2,
        6,
        8
      ],
      "rank": 2
    },
    {
      "vertices": [
        1,
        2,
        4,
        5
      ],
      "rank": 2
    },
    {
      "vertices": [
        1,
        2,
        7,
        8
      ],
      "rank": 2
    },
    {
      "vertices": [
        3,
        4,
        6,
        7
      ],
      "rank": 2
    },
    {
      "vertices": [
        3,
        5,
        6,
        8
      ],
      "rank": 2
    },
    {
      "vertices": [
        4,
        5,
        7,
        8
      ],
      "rank": 2
    },
    {
      "vertices": [
        0,
        1,
        3,
        4,
        6,
        7
      ],
      "rank": 4
    }
  ]
}