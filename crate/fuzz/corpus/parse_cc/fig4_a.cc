{
  "vertices": [
    1,
    2,
    3
  ],
  "cells": [
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
        1,
        2
      ],
      "rank": 1
    },
    {
      "vertices": [
        1,
        2,
        3
      ],
      "rank": 4
    }
  ]
}